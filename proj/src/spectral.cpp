#include "nlds/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "nlds/errors.hpp"
#include "nlds/evolution.hpp"
#include "nlds/rk4.hpp"

namespace nlds {

std::string to_string(Route r) {
    switch (r) {
        case Route::DenseEig: return "dense_eig";
        case Route::Rayleigh: return "rayleigh";
        case Route::GrowthRate: return "growth_rate";
        case Route::RadiusRoot: return "radius_root";
    }
    return "unknown";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Exists: return "exists";
        case Verdict::DoesNotExistNumerically: return "does_not_exist_numerically";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

double eps_gap(double h_max, const SpectralOptions& options) {
    return options.eps_gap_rel * (1.0 + std::abs(h_max));
}

double SpectralReport::min_max_ratio() const {
    if (!eigenfunction) return 0.0;
    const double hi = eigenfunction->maxCoeff();
    return hi > 0.0 ? eigenfunction->minCoeff() / hi : 0.0;
}

namespace {

Eigen::VectorXd normalize_sup(Eigen::VectorXd x) {
    if (x.sum() < 0.0) x = -x;
    const double s = x.cwiseAbs().maxCoeff();
    if (s > 0.0) x /= s;
    return x;
}

void assign_verdict(SpectralReport& r, const SpectralOptions& options) {
    r.gap = r.lambda_tilde - r.h_max;
    if (!r.note.empty()) {
        r.verdict = Verdict::Inconclusive;
        return;
    }
    r.verdict = (r.gap > eps_gap(r.h_max, options) && r.min_max_ratio() > options.positivity_ratio)
                    ? Verdict::Exists
                    : Verdict::Inconclusive;
}

double weighted_norm(const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    return std::sqrt((u.array().square() * w.array()).sum());
}

void require_kind(const OperatorMatrix& A, std::initializer_list<OperatorKind> kinds, const char* what) {
    for (auto k : kinds)
        if (A.kind == k) return;
    throw std::invalid_argument(std::string(what) + ": unsupported operator kind " + to_string(A.kind));
}

}  // namespace

SpectralReport principal_point_eig(const OperatorMatrix& A, const SpectralOptions& options) {
    require_kind(A, {OperatorKind::Dispersal, OperatorKind::Averaged}, "principal_point_eig");
    SpectralReport r;
    r.route = Route::DenseEig;
    r.h_max = A.h_max();

    Eigen::EigenSolver<Eigen::MatrixXd> solver(A.entries, false);
    if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed to converge");
    const Eigen::VectorXcd& ev = solver.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return ev[a].real() > ev[b].real(); });

    const std::complex<double> top = ev[order[0]];
    r.lambda_tilde = top.real();
    if (std::abs(top.imag()) > options.complex_tol) {
        r.note = "top eigenvalue is complex";
    } else if (ev.size() > 1 && top.real() - ev[order[1]].real() < options.tie_tol) {
        r.note = "top two eigenvalues tie";
    }
    if (std::abs(top.imag()) <= options.complex_tol) {
        // Inverse iteration just above the top eigenvalue.
        const auto m = A.size();
        const double shift = r.lambda_tilde + 1e-10 * (1.0 + std::abs(r.lambda_tilde));
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A.entries - shift * Eigen::MatrixXd::Identity(m, m));
        Eigen::VectorXd x = Eigen::VectorXd::Ones(m);
        for (int it = 0; it < 4; ++it) {
            x = lu.solve(x);
            if (!x.allFinite()) throw NumericalError("inverse iteration diverged");
            x /= x.cwiseAbs().maxCoeff();
        }
        r.eigenfunction = normalize_sup(std::move(x));
    }
    assign_verdict(r, options);
    return r;
}

double principal_point_rayleigh(const OperatorMatrix& A) {
    require_kind(A, {OperatorKind::Dispersal, OperatorKind::Averaged}, "principal_point_rayleigh");
    if (!A.symmetric_kernel) throw std::invalid_argument("the variational route needs a symmetric kernel");
    const Eigen::VectorXd sw = A.weights.cwiseSqrt();
    Eigen::MatrixXd s = sw.asDiagonal() * A.entries * sw.cwiseInverse().asDiagonal();
    s = 0.5 * (s + s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed to converge");
    return solver.eigenvalues().maxCoeff();
}

namespace {

// Solves R(z) = g for the real branch through z = log(g).
double invert_amplification(double g) {
    if (!(g > 0.0)) throw NumericalError("non-positive amplification factor");
    double z = std::log(g);
    for (int it = 0; it < 50; ++it) {
        const double f = detail::rk4_amplification(z) - g;
        const double df = 1.0 + z * (1.0 + z * (0.5 + z / 6.0));
        const double step = f / df;
        z -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
    return z;
}

}  // namespace

SpectralReport principal_point_growth(const OperatorMatrix& A, double t_horizon, const Eigen::VectorXd& u0,
                                      const GrowthOptions& options) {
    require_kind(A, {OperatorKind::Dispersal, OperatorKind::Averaged}, "principal_point_growth");
    if (!(t_horizon > 0.0)) throw std::invalid_argument("time horizon must be positive");
    if (u0.size() != A.size() || !(u0.minCoeff() > 0.0))
        throw std::invalid_argument("growth route needs a strictly positive initial state");
    const double dt = options.dt > 0.0 ? options.dt : default_time_step(A);
    if (dt > stability_bound(A) * (1.0 + 1e-12)) throw std::invalid_argument("time step exceeds the stability bound");
    const long budget = std::min<long>(options.max_steps, static_cast<long>(std::ceil(t_horizon / dt)));

    const auto rhs = [&A](const Eigen::VectorXd& u) -> Eigen::VectorXd { return A.entries * u; };
    Eigen::VectorXd u = u0 / weighted_norm(u0, A.weights);
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double last_change = std::numeric_limits<double>::infinity();
    int settled = 0;
    bool converged = false;
    for (long s = 0; s < budget; ++s) {
        Eigen::VectorXd next = detail::rk4_step(rhs, u, dt);
        const double g = weighted_norm(next, A.weights);
        if (!std::isfinite(g)) throw NumericalError("growth iteration produced a non-finite state");
        const double estimate = invert_amplification(g) / dt;
        u = next / g;
        if (std::isfinite(lambda)) {
            const double change = std::abs(estimate - lambda);
            // Linear convergence: remaining error ~ change * q / (1 - q).
            const double q = std::isfinite(last_change) && last_change > 0.0
                                 ? std::clamp(change / last_change, 0.0, 0.999)
                                 : 0.999;
            const double err = change / (1.0 - q);
            settled = err < options.tol ? settled + 1 : 0;
            last_change = change;
        }
        lambda = estimate;
        if (settled >= 5) {
            converged = true;
            break;
        }
    }

    SpectralReport r;
    r.route = Route::GrowthRate;
    r.lambda_tilde = lambda;
    r.h_max = A.h_max();
    r.eigenfunction = normalize_sup(u);
    if (!converged) r.note = "growth rate did not stabilize within the step budget";
    assign_verdict(r, options.spectral);
    return r;
}

RadiusResult radius_positive(const OperatorMatrix& B, const PowerOptions& options, const Eigen::VectorXd* start) {
    require_kind(B, {OperatorKind::U, OperatorKind::V}, "radius_positive");
    if (B.entries.minCoeff() < 0.0) throw std::invalid_argument("radius_positive needs a nonnegative matrix");
    const auto m = B.size();
    RadiusResult r;
    Eigen::VectorXd x = (start && start->size() == m && start->minCoeff() > 0.0) ? *start : Eigen::VectorXd::Ones(m);
    x /= x.maxCoeff();
    for (int it = 1; it <= options.max_iterations; ++it) {
        Eigen::VectorXd y = B.entries * x;
        const Eigen::ArrayXd ratio = y.array() / x.array();
        r.lower = ratio.minCoeff();
        r.upper = ratio.maxCoeff();
        r.iterations = it;
        const double top = y.maxCoeff();
        if (!(top > 0.0) || !std::isfinite(top)) {
            r.radius = 0.0;
            r.vector = x;
            r.converged = top == 0.0;
            break;
        }
        x = y / top;
        if (x.minCoeff() <= 0.0) {
            // Reducible pattern: the bracket is void, fall back to the norm ratio.
            r.lower = r.upper = top;
        }
        r.radius = 0.5 * (r.lower + r.upper);
        if (r.upper - r.lower <= options.rel_tol * r.upper) {
            r.converged = true;
            break;
        }
    }
    r.vector = x;
    if (options.verify_dense) {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(B.entries, false);
        r.dense_radius = solver.eigenvalues().cwiseAbs().maxCoeff();
    }
    return r;
}

namespace {

OperatorMatrix aux(const DispersalProblem& p, AuxOperator which, double alpha) {
    return which == AuxOperator::U ? assemble_U(p, alpha) : assemble_V(p, alpha);
}

}  // namespace

std::vector<std::pair<double, double>> probe_radius(const DispersalProblem& p, AuxOperator which, int count,
                                                    const PowerOptions& options) {
    std::vector<std::pair<double, double>> out;
    const double hm = p.h_max();
    Eigen::VectorXd warm;
    for (int k = 1; k <= count; ++k) {
        const double alpha = hm + std::pow(10.0, -k) * (1.0 + std::abs(hm));
        auto rr = radius_positive(aux(p, which, alpha), options, warm.size() ? &warm : nullptr);
        warm = rr.vector;
        out.emplace_back(alpha, rr.radius);
    }
    return out;
}

RootResult solve_r_equals_one_detailed(const DispersalProblem& p, AuxOperator which, const RootOptions& options) {
    RootResult res;
    const double hm = p.h_max();
    const double scale = 1.0 + std::abs(hm);
    Eigen::VectorXd warm;
    auto radius_at = [&](double alpha) {
        auto rr = radius_positive(aux(p, which, alpha), options.power, warm.size() ? &warm : nullptr);
        if (rr.vector.minCoeff() > 0.0) warm = rr.vector;
        return rr.radius;
    };

    std::optional<double> lo;
    for (int k = 1; k <= options.probes; ++k) {
        const double alpha = hm + std::pow(10.0, -k) * scale;
        const double r = radius_at(alpha);
        res.probes.emplace_back(alpha, r);
        if (r > 1.0) {
            lo = alpha;
            break;
        }
    }
    if (!lo) return res;

    double hi = hm + 0.1 * scale;
    double step = 0.1 * scale;
    while (radius_at(hi) > 1.0) {
        *lo = hi;
        step *= 2.0;
        hi = hm + step;
        if (!std::isfinite(hi)) throw NumericalError("no upper bracket for r(alpha) = 1");
    }
    double a = *lo;
    double b = hi;
    while (b - a > options.alpha_tol) {
        const double mid = 0.5 * (a + b);
        if (radius_at(mid) > 1.0) a = mid;
        else b = mid;
        ++res.bisection_steps;
    }
    res.alpha = 0.5 * (a + b);
    return res;
}

std::optional<double> solve_r_equals_one(const DispersalProblem& p, AuxOperator which, const RootOptions& options) {
    return solve_r_equals_one_detailed(p, which, options).alpha;
}

std::optional<double> solve_r_equals_one(const Grid& grid, const DispersalKernel& kernel, double nu,
                                         const CoefficientField& a, AuxOperator which, const RootOptions& options) {
    return solve_r_equals_one(DispersalProblem::make(grid, kernel, nu, a), which, options);
}

ExistenceEvidence existence_test(const Grid& base, const DispersalKernel& kernel, double nu,
                                 const CoefficientSource& coefficient, const ExistenceOptions& options) {
    if (options.refinement_levels < 2) throw std::invalid_argument("existence test needs at least two refinement levels");
    ExistenceEvidence ev;
    bool any_flag = false;
    int factor = 1;
    for (int level = 0; level < options.refinement_levels; ++level, factor *= options.refinement_factor) {
        const Grid g = base.refined(factor);
        const CoefficientField a = coefficient(g);
        const DispersalProblem p = DispersalProblem::make(g, kernel, nu, a);
        const SpectralReport rep = principal_point_eig(assemble_dispersal(p), options.spectral);
        if (!rep.note.empty()) any_flag = true;
        ev.levels.push_back({g.nodes_per_axis()[0], rep.lambda_tilde, rep.h_max, rep.gap,
                             eps_gap(rep.h_max, options.spectral), rep.min_max_ratio(), rep.verdict});
        if (level == 0) ev.probes = probe_radius(p, AuxOperator::U, options.probes);
    }

    bool gaps_large = true, gaps_stable = true, positive = true, ratio_stable = true;
    bool gaps_shrink = true, ratio_shrinks = true;
    for (std::size_t i = 0; i < ev.levels.size(); ++i) {
        const auto& L = ev.levels[i];
        gaps_large = gaps_large && L.gap > L.eps_gap;
        positive = positive && L.min_max_ratio > options.spectral.positivity_ratio;
        if (i == 0) continue;
        const auto& P = ev.levels[i - 1];
        gaps_stable = gaps_stable && std::abs(L.gap - P.gap) <= options.gap_stability * std::abs(P.gap);
        ratio_stable = ratio_stable && L.min_max_ratio >= 0.5 * P.min_max_ratio;
        gaps_shrink = gaps_shrink && L.gap < (1.0 - options.gap_stability) * P.gap;
        ratio_shrinks = ratio_shrinks && L.min_max_ratio < P.min_max_ratio;
    }
    if (any_flag) {
        ev.verdict = Verdict::Inconclusive;
        ev.reason = "eigensolver flagged a complex or tied top eigenvalue";
    } else if (gaps_large && gaps_stable && positive && ratio_stable) {
        ev.verdict = Verdict::Exists;
        ev.reason = "gap above eps_gap and stable under refinement; eigenfunction positive";
    } else if (gaps_shrink && ratio_shrinks) {
        ev.verdict = Verdict::DoesNotExistNumerically;
        ev.reason = "gap shrinks under refinement while the eigenfunction concentrates";
    } else {
        ev.verdict = Verdict::Inconclusive;
        ev.reason = "gap trace neither stable nor vanishing";
    }
    return ev;
}

double bar_lambda3(double nu, const CoefficientField& a, const Grid& grid, double tol) {
    if (!(nu > 0.0)) throw std::invalid_argument("dispersal rate nu must be positive");
    if (a.size() != grid.size()) throw std::invalid_argument("coefficient size does not match the grid");
    const Eigen::ArrayXd shifted = nu - a.values().array();  // lambda + nu - a = lambda + shifted
    const double volume = grid.domain().volume();
    const double w = grid.cell_volume();
    auto secular = [&](double lambda) { return (nu * w / volume) * (lambda + shifted).inverse().sum() - 1.0; };
    const double h_max = a.stats().max - nu;
    double lo = h_max;
    double hi = h_max + nu;
    const double floor = 1e-12 * (1.0 + std::abs(h_max));
    if (secular(lo + floor) < 0.0) return h_max;
    lo += floor;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (secular(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace nlds
