#include "nlds/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "nlds/competition.hpp"
#include "nlds/config.hpp"
#include "nlds/evolution.hpp"
#include "nlds/experiments.hpp"
#include "nlds/flatten.hpp"
#include "nlds/io.hpp"
#include "nlds/operators.hpp"
#include "nlds/parallel.hpp"
#include "nlds/random.hpp"
#include "nlds/spectral.hpp"

namespace nlds {

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Skip: return "skip";
    }
    return "?";
}

int VerificationReport::count(CheckStatus s) const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [s](const CheckResult& c) { return c.status == s; }));
}

namespace {

std::string measured_field(const CheckResult& c) {
    std::string out;
    for (const auto& [k, v] : c.measured) {
        if (!out.empty()) out += ';';
        out += k + "=" + format_number(v);
    }
    return out;
}

std::string csv_row(const CheckResult& c) {
    return c.name + "," + std::to_string(c.criterion) + "," + c.tag + "," + to_string(c.status) + "," +
           measured_field(c) + "," + format_number(c.tolerance);
}

}  // namespace

std::string VerificationReport::csv() const {
    std::string out = "name,criterion,tag,status,measured,tolerance\n";
    for (const auto& c : checks) out += csv_row(c) + '\n';
    return out;
}

std::string VerificationReport::text() const {
    std::ostringstream os;
    double total = 0.0;
    for (const auto& c : checks) {
        char rt[32];
        std::snprintf(rt, sizeof rt, "%.2fs", c.runtime);
        total += c.runtime;
        os << '[' << to_string(c.status) << "] " << c.name << " (criterion " << c.criterion << ", " << c.tag
           << ") tol " << format_number(c.tolerance) << " runtime " << rt << '\n';
        for (const auto& [k, v] : c.measured) os << "    " << k << " = " << format_number(v) << '\n';
        if (!c.detail.empty()) os << "    " << c.detail << '\n';
    }
    char rt[32];
    std::snprintf(rt, sizeof rt, "%.2fs", total);
    os << "passed " << count(CheckStatus::Pass) << ", failed " << count(CheckStatus::Fail) << ", skipped "
       << count(CheckStatus::Skip) << ", total runtime " << rt << '\n';
    return os.str();
}

namespace {

constexpr Boundary kAllBc[] = {Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

struct Ctx {
    CheckResult& r;
    Rng rng;
    double scale;
    int workers;
    std::uint64_t seed;

    double tol(double t) const { return t * scale; }
    void measure(const std::string& k, double v) { r.measured.emplace_back(k, v); }
    void note(const std::string& s) {
        if (!r.detail.empty()) r.detail += "; ";
        r.detail += s;
    }
};

using CheckFn = std::function<bool(Ctx&)>;

struct CheckDef {
    CheckInfo info;
    double tolerance;
    CheckFn run;
};

Grid grid1d(int n, Boundary bc) { return Grid::build(BoxDomain({0.0}, {1.0}), {n}, bc); }

DispersalKernel dispersal(const Kernel& k, const Grid& g) { return make_dispersal_kernel(k, g); }

double eig(const Grid& g, const Kernel& k, double nu, const CoefficientField& a) {
    return principal_point_eig(assemble_dispersal(g, dispersal(k, g), nu, a)).lambda_tilde;
}

struct RandomInstance {
    Boundary bc;
    Kernel kernel;
    double nu;
    AnalyticForm form;
};

RandomInstance random_instance(Rng& rng, Boundary bc, bool symmetric = true) {
    const Profile profiles[] = {Profile::Bump, Profile::TriangleTensor, Profile::CosineTensor};
    const Profile prof = profiles[rng.integer(0, 2)];
    const double delta = rng.uniform(0.15, 0.5);
    Point shift{0.0, 0.0};
    if (!symmetric) shift[0] = rng.uniform(-0.5, 0.5);
    const double nu = rng.uniform(0.3, 3.0);
    const BoxDomain dom({0.0}, {1.0});
    const double amp = rng.uniform(0.2, 1.0);
    const double off = rng.uniform(-0.5, 0.5);
    return {bc, Kernel(prof, 1, delta, shift), nu, forms::random_fourier(dom, rng, 3, amp, off)};
}

Eigen::VectorXd random_positive(Rng& rng, Eigen::Index m, double lo = 0.0, double hi = 1.0) {
    Eigen::VectorXd u(m);
    for (Eigen::Index j = 0; j < m; ++j) u[j] = rng.uniform(lo, hi);
    return u;
}

// Route agreement over randomized symmetric instances.
bool route_agreement(Ctx& c) {
    double d_ray = 0.0, d_growth = 0.0, d_root = 0.0;
    int roots = 0;
    for (int i = 0; i < 20; ++i) {
        const auto inst = random_instance(c.rng, kAllBc[i % 3]);
        const Grid g = grid1d(64, inst.bc);
        const auto p = DispersalProblem::make(g, dispersal(inst.kernel, g), inst.nu, CoefficientField::sample(g, inst.form));
        const OperatorMatrix A = assemble_dispersal(p);
        const double lam = principal_point_eig(A).lambda_tilde;
        d_ray = std::max(d_ray, std::abs(lam - principal_point_rayleigh(A)));
        GrowthOptions go;
        go.tol = 1e-9;
        const auto gr = principal_point_growth(A, 1e6, Eigen::VectorXd::Ones(A.size()), go);
        d_growth = std::max(d_growth, std::abs(lam - gr.lambda_tilde));
        for (AuxOperator w : {AuxOperator::U, AuxOperator::V}) {
            if (const auto alpha = solve_r_equals_one(p, w)) {
                ++roots;
                d_root = std::max(d_root, std::abs(lam - *alpha));
            }
        }
    }
    c.measure("max_abs_eig_minus_rayleigh", d_ray);
    c.measure("max_abs_eig_minus_growth", d_growth);
    c.measure("max_abs_eig_minus_alpha_star", d_root);
    c.measure("alpha_star_found", roots);
    return d_ray < c.tol(1e-8) && d_growth < c.tol(1e-4) && d_root < c.tol(1e-8) && roots > 0;
}

bool baseline_values(Ctx& c) {
    const Kernel k(Profile::TriangleTensor, 1, 0.5);
    double worst = 0.0;
    for (Boundary bc : {Boundary::Neumann, Boundary::Periodic}) {
        const Grid g = grid1d(64, bc);
        const auto zero = CoefficientField::sample(g, forms::constant(0.0));
        for (double nu : {0.1, 1.0, 10.0}) worst = std::max(worst, std::abs(eig(g, k, nu, zero)));
    }
    const Grid gd = grid1d(64, Boundary::Dirichlet);
    const double l1 = eig(gd, k, 1.0, CoefficientField::sample(gd, forms::constant(0.0)));
    c.measure("max_abs_lambda_neumann_periodic", worst);
    c.measure("lambda_dirichlet_nu1", l1);
    return worst < c.tol(1e-10) && l1 < -1e-4;
}

bool shift_equivariance(Ctx& c) {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const auto inst = random_instance(c.rng, kAllBc[i % 3], i % 4 != 3);
        const double shift = c.rng.uniform(-2.0, 2.0);
        const Grid g = grid1d(48, inst.bc);
        const auto dk = dispersal(inst.kernel, g);
        const auto a = CoefficientField::sample(g, inst.form);
        const double l0 = principal_point_eig(assemble_dispersal(g, dk, inst.nu, a)).lambda_tilde;
        const double l1 = principal_point_eig(assemble_dispersal(g, dk, inst.nu, a.shifted(shift))).lambda_tilde;
        worst = std::max(worst, std::abs(l1 - l0 - shift));
    }
    c.measure("max_abs_shift_defect", worst);
    return worst < c.tol(1e-10);
}

bool existence_case(Ctx& c, const Grid& base, const Kernel& k, double nu, const CoefficientSource& src,
                    const std::string& key, int levels = 3) {
    ExistenceOptions eo;
    eo.refinement_levels = levels;
    eo.gap_stability = c.tol(0.2);
    const auto ev = existence_test(base, dispersal(k, base), nu, src, eo);
    double min_gap_over_eps = std::numeric_limits<double>::infinity();
    for (const auto& L : ev.levels) min_gap_over_eps = std::min(min_gap_over_eps, L.gap / L.eps_gap);
    c.measure(key + "_min_gap_over_eps", min_gap_over_eps);
    c.measure(key + "_exists", ev.verdict == Verdict::Exists ? 1.0 : 0.0);
    if (ev.verdict != Verdict::Exists) c.note(key + ": " + ev.reason);
    return ev.verdict == Verdict::Exists;
}

bool existence_small_oscillation(Ctx& c) {
    const Kernel k(Profile::TriangleTensor, 1, 0.3);
    const BoxDomain dom({0.0}, {1.0});
    bool ok = true;
    for (Boundary bc : kAllBc)
        ok &= existence_case(c, grid1d(64, bc), k, 1.0, source_of(forms::sine(dom, 0.2)), to_string(bc));
    return ok;
}

CoefficientSource flattened(const AnalyticForm& form, const Kernel& k, double nu, double eps, double* sup = nullptr) {
    return [=](const Grid& g) {
        const auto fr = mollify_flatten(CoefficientField::sample(g, form), eps, g, make_dispersal_kernel(k, g), nu);
        if (sup) *sup = std::max(*sup, fr.sup_distance);
        return fr.field;
    };
}

bool existence_flat_max(Ctx& c) {
    const Kernel k(Profile::TriangleTensor, 1, 0.2);
    const BoxDomain dom({0.0}, {1.0});
    const double eps = 0.1, nu = 0.5;
    bool ok = true;
    double sup = 0.0;
    for (Boundary bc : kAllBc)
        ok &= existence_case(c, grid1d(64, bc), k, nu, flattened(forms::sine(dom, 1.0), k, nu, eps, &sup), to_string(bc));
    c.measure("max_perturbation", sup);
    return ok && sup < eps;
}

bool existence_2d(Ctx& c) {
    const BoxDomain dom({0.0, 0.0}, {1.0, 1.0});
    const Kernel k(Profile::CosineTensor, 2, 0.4);
    bool ok = existence_case(c, Grid::build(dom, {8, 8}, Boundary::Dirichlet), k, 1.0,
                             source_of(forms::sine(dom, 0.2, 0.5)), "dirichlet_2d");
    // Flattening in 2D: plateau property and perturbation size at one resolution.
    const Kernel kb(Profile::Bump, 2, 0.3);
    const Grid g = Grid::build(dom, {16, 16}, Boundary::Neumann);
    const auto a = CoefficientField::sample(g, forms::sine(dom, 1.0, 0.5));
    const auto fr = mollify_flatten(a, 0.6, g, dispersal(kb, g), 0.5);
    const auto h = h_field(g, dispersal(kb, g), 0.5, fr.field);
    const bool flat = has_flat_interior_max(h, g);
    c.measure("flatten_2d_sup_distance", fr.sup_distance);
    c.measure("flatten_2d_flat_max", flat ? 1.0 : 0.0);
    return ok && flat && fr.sup_distance < 0.6;
}

bool lower_bound_mean(Ctx& c) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
        const auto inst = random_instance(c.rng, i % 2 ? Boundary::Periodic : Boundary::Neumann);
        const Grid g = grid1d(64, inst.bc);
        const auto a = CoefficientField::sample(g, inst.form);
        worst = std::min(worst, eig(g, inst.kernel, inst.nu, a) - a.stats().mean);
    }
    const BoxDomain dom({0.0}, {1.0});
    const Kernel k(Profile::TriangleTensor, 1, 0.3);
    double strict = std::numeric_limits<double>::infinity(), flat = 0.0;
    for (Boundary bc : {Boundary::Neumann, Boundary::Periodic}) {
        const Grid g = grid1d(64, bc);
        const auto a = CoefficientField::sample(g, forms::sine(dom, 1.0));
        strict = std::min(strict, eig(g, k, 1.0, a) - a.stats().mean);
        flat = std::max(flat, std::abs(eig(g, k, 1.0, CoefficientField::sample(g, forms::constant(0.7))) - 0.7));
    }
    c.measure("min_lambda_minus_mean_random", worst);
    c.measure("min_lambda_minus_mean_unit_oscillation", strict);
    c.measure("max_abs_lambda_minus_constant", flat);
    return worst > -c.tol(1e-8) && strict >= 1e-4 && flat < c.tol(1e-8);
}

bool coefficient_monotonicity(Ctx& c) {
    double worst = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int i = 0; i < 20; ++i) {
        const auto inst = random_instance(c.rng, kAllBc[i % 3]);
        const Grid g = grid1d(48, inst.bc);
        const auto dk = dispersal(inst.kernel, g);
        const auto a1 = CoefficientField::sample(g, inst.form);
        const double lift = c.rng.uniform(0.01, 0.5);
        const auto bump = CoefficientField::sample(g, forms::random_fourier(g.domain(), c.rng, 3, lift, lift));
        const CoefficientField a2(g, a1.values() + bump.values(), "lifted");
        const double l1 = principal_point_eig(assemble_dispersal(g, dk, inst.nu, a1)).lambda_tilde;
        const double l2 = principal_point_eig(assemble_dispersal(g, dk, inst.nu, a2)).lambda_tilde;
        worst = std::max(worst, l1 - l2);
        EvolutionOptions eo;
        eo.positivity_tol = c.tol(1e-10);
        const auto cmp = check_coefficient_comparison(g, dk, inst.nu, a1, a2, random_positive(c.rng, g.size()), 1.0, eo);
        if (!cmp.pass) ++violations;
    }
    c.measure("max_lambda_low_minus_lambda_high", worst);
    c.measure("solution_order_violations", violations);
    return worst <= c.tol(1e-10) && violations == 0;
}

bool rate_monotonicity(Ctx& c) {
    const Kernel k(Profile::TriangleTensor, 1, 0.3);
    const BoxDomain dom({0.0}, {1.0});
    double worst = -std::numeric_limits<double>::infinity();
    for (Boundary bc : kAllBc) {
        const Grid g = grid1d(64, bc);
        const auto a = CoefficientField::sample(g, forms::sine(dom, 0.5, 1.0, 0.2));
        double prev = std::numeric_limits<double>::infinity();
        for (double nu : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double lam = eig(g, k, nu, a);
            if (std::isfinite(prev)) worst = std::max(worst, lam - prev);
            prev = lam;
        }
    }
    c.measure("max_successive_difference", worst);
    return worst < -1e-8;
}

bool rate_limits(Ctx& c) {
    const Kernel k(Profile::TriangleTensor, 1, 0.5);
    const BoxDomain dom({0.0}, {1.0});
    double small = 0.0, large = 0.0, dir = 0.0;
    for (Boundary bc : kAllBc) {
        const Grid g = grid1d(64, bc);
        const auto a = CoefficientField::sample(g, forms::sine(dom, 0.5, 1.0, 0.1));
        small = std::max(small, std::abs(eig(g, k, 1e-3, a) - a.stats().max));
        const double big = eig(g, k, 1e3, a);
        if (bc == Boundary::Dirichlet) dir = big;
        else large = std::max(large, std::abs(big - a.stats().mean));
    }
    c.measure("max_abs_small_nu_minus_a_max", small);
    c.measure("max_abs_large_nu_minus_mean", large);
    c.measure("dirichlet_large_nu_lambda", dir);
    return small < c.tol(5e-3) && large < c.tol(5e-3) && dir < -100.0;
}

bool distance_limits(Ctx& c) {
    const BoxDomain dom({0.0}, {1.0});
    const double nu = 0.1;
    GridSpec gs;
    gs.lower = {0.0};
    gs.upper = {1.0};
    gs.nodes = {32};
    const int n_small = auto_resolution(gs, 0.02, 8)[0];
    double small = 0.0;
    for (Boundary bc : kAllBc) {
        const Grid g = grid1d(n_small, bc);
        const auto a = CoefficientField::sample(g, forms::sine(dom, 0.5));
        small = std::max(small, std::abs(eig(g, Kernel(Profile::TriangleTensor, 1, 0.02), nu, a) - a.stats().max));
    }
    const Kernel wide(Profile::TriangleTensor, 1, 50.0);
    double targets[3]{};
    double bar = 0.0, bar_vs_avg = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Grid g = grid1d(64, kAllBc[i]);
        const auto a = CoefficientField::sample(g, forms::sine(dom, 0.5));
        const double lam = eig(g, wide, nu, a);
        if (kAllBc[i] == Boundary::Dirichlet) targets[i] = lam - (-nu + a.stats().max);
        if (kAllBc[i] == Boundary::Neumann) targets[i] = lam - a.stats().max;
        if (kAllBc[i] == Boundary::Periodic) {
            bar = bar_lambda3(nu, a, g);
            targets[i] = lam - bar;
            bar_vs_avg = std::abs(bar - principal_point_eig(assemble_averaged(g, nu, a)).lambda_tilde);
        }
    }
    c.measure("auto_nodes", n_small);
    c.measure("max_abs_small_delta_minus_a_max", small);
    c.measure("dirichlet_large_delta_defect", targets[0]);
    c.measure("neumann_large_delta_defect", targets[1]);
    c.measure("periodic_large_delta_defect", targets[2]);
    c.measure("secular_root_vs_averaged_eig", bar_vs_avg);
    bool ok = small < c.tol(1e-2) && bar_vs_avg < c.tol(1e-8);
    for (double t : targets) ok &= std::abs(t) < c.tol(5e-3);
    return ok;
}

bool boundary_ordering(Ctx& c) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
        const auto inst = random_instance(c.rng, Boundary::Dirichlet);
        const Grid gd = grid1d(48, Boundary::Dirichlet);
        const Grid gn = gd.with_bc(Boundary::Neumann);
        const double l1 = eig(gd, inst.kernel, inst.nu, CoefficientField::sample(gd, inst.form));
        const double l2 = eig(gn, inst.kernel, inst.nu, CoefficientField::sample(gn, inst.form));
        worst = std::max(worst, l1 - l2);
    }
    c.measure("max_dirichlet_minus_neumann", worst);
    return worst <= c.tol(1e-10);
}

bool comparison_principle(Ctx& c) {
    int violations = 0, strict_failures = 0, equal_pairs = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        const auto inst = random_instance(c.rng, kAllBc[i % 3]);
        const Grid g = grid1d(48, inst.bc);
        const auto A = assemble_dispersal(g, dispersal(inst.kernel, g), inst.nu, CoefficientField::sample(g, inst.form));
        const auto m = static_cast<Eigen::Index>(g.size());
        const Eigen::VectorXd u1 = random_positive(c.rng, m);
        Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
        if (i % 10 != 9) {
            for (Eigen::Index j = 0; j < m; ++j)
                if (c.rng.uniform() < 0.3) d[j] = c.rng.uniform(0.0, 0.5);
            d[c.rng.integer(0, static_cast<int>(m) - 1)] = 0.25;
        } else {
            ++equal_pairs;
        }
        EvolutionOptions eo;
        eo.positivity_tol = c.tol(1e-10);
        const auto v = check_comparison(A, u1, u1 + d, 1.0, eo);
        if (!v.ordered) ++violations;
        if (!v.initially_equal) {
            if (!v.strict_at_end) ++strict_failures;
            min_gap = std::min(min_gap, v.min_final_gap);
        }
    }
    c.measure("order_violations", violations);
    c.measure("strict_failures", strict_failures);
    c.measure("equal_pairs", equal_pairs);
    c.measure("min_final_gap_unequal", min_gap);
    return violations == 0 && strict_failures == 0;
}

bool integrator_accuracy(Ctx& c) {
    const BoxDomain dom({0.0}, {1.0});
    const Grid g = grid1d(64, Boundary::Dirichlet);
    const auto A = assemble_dispersal(g, dispersal(Kernel(Profile::TriangleTensor, 1, 0.3), g), 1.0,
                                      CoefficientField::sample(g, forms::sine(dom, 0.5)));
    Eigen::VectorXd u0(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) u0[static_cast<Eigen::Index>(j)] = 1.0 + 0.5 * std::cos(3.0 * g.node(j)[0]);
    const Eigen::MatrixXd E = A.entries.exp();
    const Eigen::VectorXd exact = E * u0;
    auto err = [&](double dt) {
        EvolutionOptions eo;
        eo.dt = dt;
        eo.capture = false;
        return (evolve_linear(A, u0, 1.0, eo).final_state.values - exact).cwiseAbs().maxCoeff();
    };
    const double e_fine = err(0.01);
    const double e1 = err(0.1), e2 = err(0.05), e3 = err(0.025);
    const double order = std::min(std::log2(e1 / e2), std::log2(e2 / e3));
    c.measure("sup_error_dt_0.01", e_fine);
    c.measure("observed_order", order);
    return e_fine < c.tol(1e-8) && order >= 3.5;
}

bool competitive_exclusion(Ctx& c) {
    const BoxDomain dom({0.0}, {1.0});
    const Grid g = grid1d(256, Boundary::Dirichlet);
    const Kernel k(Profile::TriangleTensor, 1, 0.3);
    const double nu = 1.0;
    const auto r = CoefficientField::sample(g, forms::sine(dom, 0.5, 1.0, 1.0));
    const auto p = CompetitionProblem::make(g, k, nu, r);
    const auto us = steady_state_single(p, Species::Dirichlet);
    const auto vs = steady_state_single(p, Species::Neumann);
    const auto m = static_cast<Eigen::Index>(g.size());
    Eigen::VectorXd u0(m), v0(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        u0[j] = c.rng.uniform(0.2, 1.0);
        v0[j] = c.rng.uniform(0.2, 1.0);
    }
    const double tol = 1e-3;
    CompetitionOptions co;
    co.stop_below = 0.01 * tol;
    const auto tr = run_exclusion(p, u0, v0, vs.values, co);
    const auto ex = verify_exclusion(tr, vs.values, c.tol(tol));
    const double lam_star = eig(g, k, nu, CoefficientField(g, p.f(us.values), "f_u_star"));
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
    const auto [du1, dv1] = rhs_competition(p, us.values, zero);
    const auto [du2, dv2] = rhs_competition(p, zero, vs.values);
    const double drift1 = std::max(du1.cwiseAbs().maxCoeff(), dv1.cwiseAbs().maxCoeff());
    const double drift2 = std::max(du2.cwiseAbs().maxCoeff(), dv2.cwiseAbs().maxCoeff());
    c.measure("lambda1_at_zero", p.assumptions.lambda1);
    c.measure("final_u_sup", ex.final_u_sup);
    c.measure("final_v_residual", ex.final_v_residual);
    c.measure("monotone_tail", ex.u_monotone && ex.v_monotone ? 1.0 : 0.0);
    c.measure("horizon", tr.times.back());
    c.measure("lambda1_at_u_star", lam_star);
    c.measure("drift_u_star_0", drift1);
    c.measure("drift_0_v_star", drift2);
    if (!ex.pass) c.note("exclusion failed on " + ex.failing_metric);
    return p.assumptions.lambda1_positive && ex.pass && std::abs(lam_star) < c.tol(1e-6) && drift1 < c.tol(1e-6) &&
           drift2 < c.tol(1e-6);
}

const std::vector<CheckDef>& registry();

CheckResult run_one(const CheckDef& def, const VerifyOptions& opt) {
    CheckResult r;
    r.criterion = def.info.criterion;
    r.name = def.info.name;
    r.tag = def.info.tag;
    r.labels = def.info.labels;
    r.tolerance = def.tolerance * opt.tolerance_scale;
    const auto t0 = std::chrono::steady_clock::now();
    Ctx c{r, Rng(opt.seed ^ fnv1a(def.info.name)), opt.tolerance_scale, opt.workers, opt.seed};
    try {
        r.status = def.run(c) ? CheckStatus::Pass : CheckStatus::Fail;
    } catch (const std::exception& e) {
        r.status = CheckStatus::Fail;
        c.note(std::string("error: ") + e.what());
    }
    r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

bool determinism(Ctx& c) {
    VerifyOptions opt;
    opt.seed = c.seed;
    opt.tolerance_scale = c.scale;
    int mismatches = 0, compared = 0;
    for (const auto& def : registry()) {
        const auto& labels = def.info.labels;
        if (std::find(labels.begin(), labels.end(), "random") == labels.end()) continue;
        if (std::find(labels.begin(), labels.end(), "slow") != labels.end()) continue;
        if (def.info.criterion == 14) continue;
        ++compared;
        if (csv_row(run_one(def, opt)) != csv_row(run_one(def, opt))) ++mismatches;
    }
    ScenarioConfig cfg;
    cfg.grid.nodes = {48};
    cfg.grid.bc = Boundary::Neumann;
    cfg.coefficient.form = "random_fourier";
    cfg.seed = c.seed;
    const std::vector<double> nus{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    const bool sweep_same = sweep_nu(cfg, nus, 1).csv() == sweep_nu(cfg, nus, 3).csv();
    c.measure("checks_rerun", compared);
    c.measure("row_mismatches", mismatches);
    c.measure("sweep_workers_identical", sweep_same ? 1.0 : 0.0);
    return mismatches == 0 && sweep_same && compared > 0;
}

const std::vector<CheckDef>& registry() {
    static const std::vector<CheckDef> defs = {
        {{1, "route_agreement", "route-agreement", {"random"}}, 1e-8, route_agreement},
        {{2, "baseline_zero_coefficient", "baseline-values", {}}, 1e-10, baseline_values},
        {{3, "shift_equivariance", "shift-equivariance", {"random"}}, 1e-10, shift_equivariance},
        {{4, "existence_small_oscillation", "existence-criteria", {}}, 0.2, existence_small_oscillation},
        {{4, "existence_flat_maximum", "existence-criteria", {}}, 0.2, existence_flat_max},
        {{4, "existence_2d", "existence-criteria", {"2d", "slow"}}, 0.2, existence_2d},
        {{5, "lower_bound_mean", "lower-bound-mean", {"random"}}, 1e-8, lower_bound_mean},
        {{6, "coefficient_monotonicity", "coefficient-monotonicity", {"random"}}, 1e-10, coefficient_monotonicity},
        {{7, "rate_monotonicity", "rate-monotonicity", {}}, 1e-8, rate_monotonicity},
        {{8, "rate_limits", "rate-limits", {}}, 5e-3, rate_limits},
        {{9, "distance_limits", "distance-limits", {}}, 5e-3, distance_limits},
        {{10, "boundary_ordering", "boundary-ordering", {"random"}}, 1e-10, boundary_ordering},
        {{11, "comparison_principle", "comparison-principle", {"random"}}, 1e-10, comparison_principle},
        {{12, "integrator_accuracy", "integrator-accuracy", {}}, 1e-8, integrator_accuracy},
        {{13, "competitive_exclusion", "competitive-exclusion", {"random"}}, 1e-3, competitive_exclusion},
        {{14, "determinism", "determinism", {}}, 0.0, determinism},
    };
    return defs;
}

bool skipped(const CheckInfo& info, const VerifyOptions& opt) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), info.name) == opt.only.end()) return true;
    for (const auto& s : opt.skip) {
        if (s == info.name || s == info.tag || s == std::to_string(info.criterion)) return true;
        if (std::find(info.labels.begin(), info.labels.end(), s) != info.labels.end()) return true;
    }
    return false;
}

}  // namespace

std::vector<CheckInfo> list_checks() {
    std::vector<CheckInfo> out;
    for (const auto& d : registry()) out.push_back(d.info);
    return out;
}

VerificationReport verify_suite(const VerifyOptions& options) {
    if (!(options.tolerance_scale >= 0.0)) throw std::invalid_argument("tolerance_scale must be nonnegative");
    const auto& defs = registry();
    VerificationReport rep;
    rep.checks = parallel_map(defs.size(), options.workers, [&](std::size_t i) {
        const CheckDef& d = defs[i];
        if (skipped(d.info, options)) {
            CheckResult r;
            r.criterion = d.info.criterion;
            r.name = d.info.name;
            r.tag = d.info.tag;
            r.labels = d.info.labels;
            r.tolerance = d.tolerance * options.tolerance_scale;
            r.status = CheckStatus::Skip;
            r.detail = "skipped by request";
            return r;
        }
        return run_one(d, options);
    });
    return rep;
}

}  // namespace nlds
