#include "nlds/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "nlds/competition.hpp"
#include "nlds/errors.hpp"
#include "nlds/evolution.hpp"
#include "nlds/io.hpp"
#include "nlds/operators.hpp"
#include "nlds/parallel.hpp"
#include "nlds/plot.hpp"
#include "nlds/random.hpp"
#include "nlds/verify.hpp"

namespace nlds {

std::string SweepResult::csv() const {
    std::ostringstream os;
    write_spectrum_csv_header(os);
    for (const auto& r : rows) write_spectrum_csv_row(os, r.context, r.report);
    return os.str();
}

bool SweepResult::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const TrendCheck& c) { return c.pass; });
}

namespace {

SpectralOptions spectral_options(const ScenarioConfig& c) {
    SpectralOptions o;
    o.eps_gap_rel = c.tolerances.eps_gap_rel;
    o.positivity_ratio = c.tolerances.positivity_ratio;
    return o;
}

bool is_constant(const CoefficientField& a) { return a.stats().max - a.stats().min <= 1e-12; }

std::string fmt(double x) { return format_number(x); }

TrendCheck within(const std::string& name, double value, double target, double tol) {
    std::ostringstream d;
    d << "value " << fmt(value) << " target " << fmt(target) << " |diff| " << fmt(std::abs(value - target))
      << " tol " << fmt(tol);
    return {name, std::abs(value - target) <= tol, d.str()};
}

void add_sweep_trends(SweepResult& res, const ScenarioConfig& base, const CoefficientField& a, bool symmetric) {
    const auto& rows = res.rows;
    if (rows.empty() || !base.sweep.assert_trends) return;
    const Boundary bc = base.grid.bc;
    if (is_constant(a) && bc != Boundary::Dirichlet) {
        double worst = 0.0;
        for (const auto& r : rows) worst = std::max(worst, std::abs(r.report.lambda_tilde - a.stats().max));
        res.checks.push_back({"constant_column", worst <= 1e-10, "max |lambda - c| = " + fmt(worst)});
        return;
    }
    if (symmetric && !is_constant(a) && rows.size() > 1) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < rows.size(); ++i)
            worst = std::max(worst, rows[i].report.lambda_tilde - rows[i - 1].report.lambda_tilde);
        res.checks.push_back({"strictly_decreasing", worst < -1e-8, "largest successive difference " + fmt(worst)});
    }
    if (rows.front().parameter <= 1e-2)
        res.checks.push_back(within("small_nu_limit", rows.front().report.lambda_tilde, a.stats().max,
                                    base.sweep.endpoint_tol));
    if (rows.back().parameter >= 1e2) {
        const double lam = rows.back().report.lambda_tilde;
        if (bc == Boundary::Dirichlet) {
            const double k = base.sweep.divergence_threshold;
            res.checks.push_back({"large_nu_divergence", lam < -k, "lambda " + fmt(lam) + " threshold -" + fmt(k)});
        } else {
            res.checks.push_back(within("large_nu_limit", lam, a.stats().mean, base.sweep.endpoint_tol));
        }
    }
}

}  // namespace

SweepResult sweep_nu(const ScenarioConfig& base, const std::vector<double>& nu_list, int workers) {
    if (nu_list.empty()) throw ConfigError("sweep.nu: must not be empty");
    const Grid grid = make_grid(base.grid);
    const Kernel kernel = make_kernel(base.kernel, grid.dim());
    const DispersalKernel dk = make_dispersal_kernel(kernel, grid);
    const SpectralOptions so = spectral_options(base);
    auto source_for = [&](double nu) {
        return make_coefficient_source(base.coefficient, grid.domain(), base.seed, kernel, nu);
    };
    const CoefficientField a0 = source_for(nu_list.front())(grid);

    SweepResult res;
    res.nodes = nodes_label(grid);
    res.a_max = a0.stats().max;
    res.a_hat = a0.stats().mean;
    res.rows = parallel_map(nu_list.size(), workers, [&](std::size_t i) {
        const double nu = nu_list[i];
        const CoefficientField a = base.coefficient.flatten_epsilon > 0.0 ? source_for(nu)(grid) : a0;
        SweepRow row;
        row.parameter = nu;
        row.context = {grid.bc(), nu, kernel.delta(), a.name(), res.nodes};
        row.report = principal_point_eig(assemble_dispersal(grid, dk, nu, a), so);
        if (base.sweep.cross_check) {
            const Grid fine = grid.refined(2);
            const auto rep = principal_point_eig(
                assemble_dispersal(fine, make_dispersal_kernel(kernel, fine), nu, source_for(nu)(fine)), so);
            row.report.refinement_trace = {{grid.nodes_per_axis()[0], row.report.lambda_tilde},
                                           {fine.nodes_per_axis()[0], rep.lambda_tilde}};
        }
        return row;
    });
    if (base.sweep.cross_check) {
        double worst = 0.0;
        for (const auto& r : res.rows)
            worst = std::max(worst, std::abs(r.report.refinement_trace[1].second - r.report.refinement_trace[0].second));
        res.checks.push_back({"refinement_cross_check", worst <= base.sweep.endpoint_tol,
                              "max |lambda(2n) - lambda(n)| = " + fmt(worst)});
    }
    add_sweep_trends(res, base, a0, kernel.symmetric());
    return res;
}

std::vector<int> auto_resolution(const GridSpec& grid, double delta_min, int nodes_per_delta) {
    std::vector<int> nodes = grid.nodes;
    const double per_unit = nodes_per_delta / delta_min;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        const double extent = grid.upper[a] - grid.lower[a];
        nodes[a] = std::max(nodes[a], static_cast<int>(std::ceil(per_unit * extent - 1e-9)));
    }
    return nodes;
}

SweepResult sweep_delta(const ScenarioConfig& base, const std::vector<double>& delta_list, int workers) {
    if (delta_list.empty()) throw ConfigError("sweep.delta: must not be empty");
    GridSpec gs = base.grid;
    gs.nodes = auto_resolution(base.grid, delta_list.front(), base.sweep.nodes_per_delta);
    const Grid grid = make_grid(gs);
    const double nu = base.nu.front();
    const SpectralOptions so = spectral_options(base);

    SweepResult res;
    res.nodes = nodes_label(grid);
    if (static_cast<long>(grid.size()) > base.sweep.dense_budget) {
        res.warnings.push_back("resolution " + res.nodes + " (" + std::to_string(grid.size()) +
                               " nodes) exceeds the dense budget of " + std::to_string(base.sweep.dense_budget));
    }
    const Kernel k0 = make_kernel(base.kernel, grid.dim());
    const CoefficientField a0 = make_coefficient_source(base.coefficient, grid.domain(), base.seed, k0, nu)(grid);
    res.a_max = a0.stats().max;
    res.a_hat = a0.stats().mean;
    res.rows = parallel_map(delta_list.size(), workers, [&](std::size_t i) {
        const Kernel k = k0.with_delta(delta_list[i]);
        const CoefficientField a = base.coefficient.flatten_epsilon > 0.0
                                       ? make_coefficient_source(base.coefficient, grid.domain(), base.seed, k, nu)(grid)
                                       : a0;
        SweepRow row;
        row.parameter = delta_list[i];
        row.context = {grid.bc(), nu, k.delta(), a.name(), res.nodes};
        row.report = principal_point_eig(assemble_dispersal(grid, make_dispersal_kernel(k, grid), nu, a), so);
        return row;
    });
    if (base.sweep.assert_trends) {
        if (res.rows.front().parameter <= 0.05)
            res.checks.push_back(within("small_delta_limit", res.rows.front().report.lambda_tilde, a0.stats().max,
                                        base.sweep.small_delta_tol));
        if (res.rows.back().parameter >= 10.0) {
            double target = a0.stats().max;
            if (grid.bc() == Boundary::Dirichlet) target = -nu + a0.stats().max;
            if (grid.bc() == Boundary::Periodic) target = bar_lambda3(nu, a0, grid);
            res.checks.push_back(
                within("large_delta_limit", res.rows.back().report.lambda_tilde, target, base.sweep.endpoint_tol));
        }
    }
    return res;
}

namespace {

struct Sink {
    std::string dir;
    std::vector<std::string> files;

    void write(const std::string& name, const std::string& content) {
        const std::string p = (std::filesystem::path(dir) / name).string();
        write_text_file(p, content);
        files.push_back(p);
    }
};

std::string checks_text(const SweepResult& res) {
    std::ostringstream os;
    for (const auto& w : res.warnings) os << "warning = " << w << '\n';
    for (const auto& c : res.checks) os << c.name << " = " << (c.pass ? "pass" : "fail") << " (" << c.detail << ")\n";
    return os.str();
}

void emit(const RunContext& ctx, const std::string& csv, const std::string& report) {
    std::ostream& out = ctx.out ? *ctx.out : std::cout;
    out << (ctx.format == "report" ? report : csv);
}

RunOutcome run_sweep(const ScenarioConfig& c, const RunContext& ctx, Sink& sink, bool over_nu, int workers) {
    std::ostream& log = ctx.log ? *ctx.log : std::cerr;
    const auto& list = over_nu ? c.sweep.nu : c.sweep.delta;
    if (list.empty()) throw ConfigError(over_nu ? "sweep.nu: required for sweep_nu" : "sweep.delta: required for sweep_delta");
    const SweepResult res = over_nu ? sweep_nu(c, list, workers) : sweep_delta(c, list, workers);
    for (const auto& w : res.warnings) log << "warning: " << w << '\n';
    const std::string stem = over_nu ? "sweep_nu" : "sweep_delta";
    const std::string csv = res.csv();
    std::ostringstream report;
    report << "experiment = " << stem << "\nnodes = " << res.nodes << "\na_max = " << fmt(res.a_max)
           << "\na_hat = " << fmt(res.a_hat) << '\n'
           << checks_text(res);
    sink.write(stem + ".csv", csv);
    sink.write(stem + "_checks.txt", report.str());
    if (c.output.plots) {
        Series s{"lambda_tilde", {}, {}}, hm{"h_max", {}, {}};
        for (const auto& r : res.rows) {
            s.x.push_back(r.parameter);
            s.y.push_back(r.report.lambda_tilde);
            hm.x.push_back(r.parameter);
            hm.y.push_back(r.report.h_max);
        }
        PlotSpec spec{"principal spectrum point vs " + std::string(over_nu ? "nu" : "delta") + " (" +
                          to_string(c.grid.bc) + ")",
                      over_nu ? "nu" : "delta", "lambda", true};
        sink.write(stem + ".svg", line_plot_svg(spec, {s, hm}));
    }
    emit(ctx, csv, report.str());
    return {res.all_pass() ? 0 : 1, {}};
}

RunOutcome run_spectrum(const ScenarioConfig& c, const RunContext& ctx, Sink& sink) {
    std::ostream& log = ctx.log ? *ctx.log : std::cerr;
    const Grid grid = make_grid(c.grid);
    const Kernel kernel = make_kernel(c.kernel, grid.dim());
    const DispersalKernel dk = make_dispersal_kernel(kernel, grid);
    const SpectralOptions so = spectral_options(c);
    std::ostringstream csv, report;
    write_spectrum_csv_header(csv);
    for (double nu : c.nu) {
        const CoefficientSource source = make_coefficient_source(c.coefficient, grid.domain(), c.seed, kernel, nu);
        const CoefficientField a = source(grid);
        const DispersalProblem p = DispersalProblem::make(grid, dk, nu, a);
        const OperatorMatrix A = assemble_dispersal(p);
        const SpectrumRowContext row{grid.bc(), nu, kernel.delta(), a.name(), nodes_label(grid)};
        for (const auto& route : c.routes) {
            SpectralReport r;
            if (route == "dense_eig") {
                r = principal_point_eig(A, so);
            } else if (route == "rayleigh") {
                if (!kernel.symmetric()) {
                    log << "warning: rayleigh route skipped (asymmetric kernel)\n";
                    continue;
                }
                r.route = Route::Rayleigh;
                r.lambda_tilde = principal_point_rayleigh(A);
                r.h_max = A.h_max();
                r.gap = r.lambda_tilde - r.h_max;
                r.note = "no eigenvector on this route";
            } else if (route == "growth_rate") {
                GrowthOptions g;
                g.tol = c.tolerances.growth_tol;
                g.spectral = so;
                r = principal_point_growth(A, 1e6, Eigen::VectorXd::Ones(A.size()), g);
            } else {
                RootOptions ro;
                ro.alpha_tol = c.tolerances.alpha_tol;
                ro.power.rel_tol = c.tolerances.power_rel_tol;
                const auto root = solve_r_equals_one(p, AuxOperator::U, ro);
                r.route = Route::RadiusRoot;
                r.h_max = p.h_max();
                r.lambda_tilde = root ? *root : std::numeric_limits<double>::quiet_NaN();
                r.gap = r.lambda_tilde - r.h_max;
                r.verdict = root ? Verdict::Exists : Verdict::Inconclusive;
            }
            write_spectrum_csv_row(csv, row, r);
            write_spectral_record(report, row, r);
            report << '\n';
        }
        if (c.existence) {
            ExistenceOptions eo;
            eo.spectral = so;
            eo.refinement_levels = c.refinement_levels;
            const auto ev = existence_test(grid, dk, nu, source, eo);
            report << "existence_verdict = " << to_string(ev.verdict) << "\nexistence_reason = " << ev.reason << '\n';
            for (const auto& L : ev.levels)
                report << "level[" << L.nodes << "] = lambda " << fmt(L.lambda_tilde) << " gap " << fmt(L.gap)
                       << " ratio " << fmt(L.min_max_ratio) << '\n';
            for (const auto& [alpha, r] : ev.probes) report << "probe r(U) at " << fmt(alpha) << " = " << fmt(r) << '\n';
            report << '\n';
        }
        if (c.output.dump_matrix) {
            std::ostringstream m;
            write_matrix(A, m);
            sink.write("matrix_nu_" + fmt(nu) + ".csv", m.str());
        }
    }
    sink.write("spectrum.csv", csv.str());
    sink.write("spectrum_report.txt", report.str());
    emit(ctx, csv.str(), report.str());
    return {0, {}};
}

Eigen::VectorXd initial_state(const std::string& kind, const Grid& grid, std::uint64_t seed) {
    const auto m = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd u(m);
    if (kind == "constant") return Eigen::VectorXd::Ones(m);
    if (kind == "bump") {
        for (Eigen::Index j = 0; j < m; ++j) {
            double r2 = 0.0;
            for (int a = 0; a < grid.dim(); ++a) {
                const double c = 0.5 * (grid.domain().lower()[a] + grid.domain().upper()[a]);
                const double z = (grid.node(static_cast<std::size_t>(j))[a] - c) / (0.25 * grid.domain().extent(a));
                r2 += z * z;
            }
            u[j] = r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
        }
        return u;
    }
    Rng rng(seed);
    const auto form = forms::random_fourier(grid.domain(), rng, 3, 0.5, 1.0);
    return CoefficientField::sample(grid, form).values();
}

RunOutcome run_evolve(const ScenarioConfig& c, const RunContext& ctx, Sink& sink) {
    const Grid grid = make_grid(c.grid);
    const Kernel kernel = make_kernel(c.kernel, grid.dim());
    const double nu = c.nu.front();
    const CoefficientField a = make_coefficient_source(c.coefficient, grid.domain(), c.seed, kernel, nu)(grid);
    const OperatorMatrix A = assemble_dispersal(grid, make_dispersal_kernel(kernel, grid), nu, a);
    const Eigen::VectorXd u0 = initial_state(c.evolve.initial, grid, c.seed);
    EvolutionOptions eo;
    eo.dt = c.evolve.dt;
    eo.capture_stride = c.evolve.stride;
    const auto res = evolve_linear(A, u0, c.evolve.T, eo);
    std::ostringstream csv, report;
    write_trajectory_csv(csv, res.trajectory, trajectory_format_from_string(c.evolve.format));
    const double n0 = std::sqrt((u0.array().square() * A.weights.array()).sum());
    const double n1 = std::sqrt((res.final_state.values.array().square() * A.weights.array()).sum());
    report << "experiment = evolve\nbc = " << to_string(grid.bc()) << "\nnu = " << fmt(nu) << "\nT = "
           << fmt(c.evolve.T) << "\ndt = " << fmt(res.dt) << "\nsteps = " << res.steps
           << "\nfinal_sup = " << fmt(res.final_state.values.cwiseAbs().maxCoeff())
           << "\nfinal_min = " << fmt(res.final_state.values.minCoeff())
           << "\nmean_log_growth = " << fmt(std::log(n1 / n0) / c.evolve.T) << '\n';
    sink.write("trajectory.csv", csv.str());
    sink.write("evolve_report.txt", report.str());
    emit(ctx, csv.str(), report.str());
    return {0, {}};
}

RunOutcome run_compete(const ScenarioConfig& c, const RunContext& ctx, Sink& sink) {
    const Grid grid = make_grid(c.grid);
    if (grid.bc() == Boundary::Periodic) throw ConfigError("grid.bc: compete needs a non-periodic box");
    const Kernel kernel = make_kernel(c.kernel, grid.dim());
    if (!kernel.symmetric()) throw ConfigError("kernel.shift: compete needs a symmetric kernel");
    const double nu = c.nu.front();
    const CoefficientField r = make_coefficient_source(c.coefficient, grid.domain(), c.seed, kernel, nu)(grid);
    const CompetitionProblem p = CompetitionProblem::make(grid, kernel, nu, r, c.compete.growth);
    const auto us = steady_state_single(p, Species::Dirichlet);
    const auto vs = steady_state_single(p, Species::Neumann);
    const auto m = static_cast<Eigen::Index>(grid.size());
    const Eigen::VectorXd u0 = Eigen::VectorXd::Constant(m, c.compete.u0);
    const Eigen::VectorXd v0 = Eigen::VectorXd::Constant(m, c.compete.v0);
    CompetitionOptions co;
    co.capture_stride = c.compete.stride;
    co.stop_below = 0.01 * c.compete.tol;
    const auto tr = run_exclusion(p, u0, v0, vs.values, co, c.compete.t_cap);
    const auto verdict = verify_exclusion(tr, vs.values, c.compete.tol);

    OperatorMatrix A;
    A.entries = nu * p.kmat;
    const Eigen::VectorXd h = p.f(us.values).array() - nu;
    A.entries.diagonal() += h;
    A.h_values = h;
    A.weights = Eigen::VectorXd::Constant(m, grid.cell_volume());
    const double lam_star = principal_point_eig(A).lambda_tilde;

    std::ostringstream csv, diag, report;
    write_competition_csv(csv, tr, trajectory_format_from_string(c.compete.format));
    write_competition_diagnostics_csv(diag, tr);
    report << "experiment = compete\ngrowth = " << to_string(p.form) << "\nnu = " << fmt(nu)
           << "\nlambda1_at_zero = " << fmt(p.assumptions.lambda1) << "\nlambda2_at_zero = "
           << fmt(p.assumptions.lambda2) << "\nlambda1_positive = " << (p.assumptions.lambda1_positive ? "true" : "false")
           << "\nu_star_residual = " << fmt(us.residual) << "\nv_star_residual = " << fmt(vs.residual)
           << "\nlambda1_at_u_star = " << fmt(lam_star) << "\nhorizon = " << fmt(tr.times.back())
           << "\ndt = " << fmt(tr.dt) << "\nfinal_u_sup = " << fmt(verdict.final_u_sup)
           << "\nfinal_v_residual = " << fmt(verdict.final_v_residual)
           << "\nu_monotone_tail = " << (verdict.u_monotone ? "true" : "false")
           << "\nv_monotone_tail = " << (verdict.v_monotone ? "true" : "false")
           << "\nexclusion = " << (verdict.pass ? "pass" : "fail") << '\n';
    if (!verdict.pass) report << "failing_metric = " << verdict.failing_metric << '\n';
    sink.write("competition.csv", csv.str());
    sink.write("competition_diagnostics.csv", diag.str());
    sink.write("competition_report.txt", report.str());
    if (c.output.plots) {
        Series su{"sup u", {}, {}}, sv{"sup |v - v*|", {}, {}};
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            su.x.push_back(tr.times[i]);
            su.y.push_back(std::log10(std::max(tr.diagnostics[i].u_sup, 1e-300)));
            sv.x.push_back(tr.times[i]);
            sv.y.push_back(std::log10(std::max(tr.diagnostics[i].v_residual, 1e-300)));
        }
        sink.write("competition.svg", line_plot_svg({"exclusion diagnostics", "t", "log10", false}, {su, sv}));
    }
    emit(ctx, diag.str(), report.str());
    return {verdict.pass ? 0 : 1, {}};
}

RunOutcome run_verify(const ScenarioConfig& c, const RunContext& ctx, Sink& sink, int workers) {
    VerifyOptions vo;
    vo.seed = c.seed;
    vo.skip = c.verify.skip;
    vo.tolerance_scale = c.verify.tolerance_scale;
    vo.workers = workers;
    const VerificationReport rep = verify_suite(vo);
    sink.write("verify.csv", rep.csv());
    sink.write("verify_report.txt", rep.text());
    emit(ctx, rep.csv(), rep.text());
    return {rep.all_pass() ? 0 : 1, {}};
}

}  // namespace

RunOutcome run_scenario(const ScenarioConfig& config, const RunContext& ctx) {
    if (ctx.format != "csv" && ctx.format != "report") throw ConfigError("--format: expected csv or report");
    Sink sink{ctx.out_dir.empty() ? config.output.dir : ctx.out_dir, {}};
    const int workers = ctx.workers > 0 ? ctx.workers : config.workers;
    RunOutcome out;
    switch (config.experiment) {
        case Experiment::Spectrum: out = run_spectrum(config, ctx, sink); break;
        case Experiment::SweepNu: out = run_sweep(config, ctx, sink, true, workers); break;
        case Experiment::SweepDelta: out = run_sweep(config, ctx, sink, false, workers); break;
        case Experiment::Evolve: out = run_evolve(config, ctx, sink); break;
        case Experiment::Compete: out = run_compete(config, ctx, sink); break;
        case Experiment::Verify: out = run_verify(config, ctx, sink, workers); break;
    }
    out.files = sink.files;
    return out;
}

}  // namespace nlds
