#include "nlds/competition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nlds/errors.hpp"
#include "nlds/operators.hpp"
#include "nlds/rk4.hpp"
#include "nlds/spectral.hpp"

namespace nlds {

std::string to_string(GrowthForm f) {
    return f == GrowthForm::Logistic ? "logistic" : "logistic_quadratic";
}

GrowthForm growth_form_from_string(const std::string& name) {
    if (name == "logistic") return GrowthForm::Logistic;
    if (name == "logistic_quadratic") return GrowthForm::LogisticQuadratic;
    throw std::invalid_argument("unknown growth form '" + name + "' (logistic, logistic_quadratic)");
}

namespace {

double lambda_of(const CompetitionProblem& p, const Eigen::VectorXd& c, const Eigen::VectorXd& a) {
    OperatorMatrix A;
    A.entries = p.nu * p.kmat;
    A.entries.diagonal() += a - p.nu * c;
    A.h_values = a - p.nu * c;
    A.weights = Eigen::VectorXd::Constant(A.entries.rows(), p.grid.cell_volume());
    return principal_point_eig(A).lambda_tilde;
}

Eigen::VectorXd loss(const CompetitionProblem& p, Species s) {
    return s == Species::Dirichlet ? Eigen::VectorXd::Ones(p.b.size()) : p.b;
}

Eigen::VectorXd rhs_single(const CompetitionProblem& p, const Eigen::VectorXd& c, const Eigen::VectorXd& u) {
    return p.nu * (p.kmat * u - c.cwiseProduct(u)) + u.cwiseProduct(p.f(u));
}

}  // namespace

CompetitionProblem CompetitionProblem::make(const Grid& grid, const Kernel& kernel, double nu,
                                            const CoefficientField& r, GrowthForm form) {
    if (grid.bc() == Boundary::Periodic) throw std::invalid_argument("competition runs on a non-periodic box");
    if (!kernel.symmetric()) throw std::invalid_argument("competition needs a symmetric kernel");
    if (!(nu > 0.0)) throw std::invalid_argument("dispersal rate nu must be positive");
    if (r.size() != grid.size()) throw std::invalid_argument("growth field does not match the grid");
    CompetitionProblem p{grid, kernel_matrix(grid, kernel), {}, nu, r.values(), r.name(), form, {}};
    p.b = p.kmat.rowwise().sum();
    p.assumptions.lambda1 = lambda_of(p, Eigen::VectorXd::Ones(p.b.size()), p.r);
    p.assumptions.lambda2 = lambda_of(p, p.b, p.r);
    p.assumptions.lambda1_positive = p.assumptions.lambda1 > 0.0;
    return p;
}

Eigen::VectorXd CompetitionProblem::f(const Eigen::VectorXd& w) const {
    Eigen::ArrayXd out = r.array() - w.array();
    if (form == GrowthForm::LogisticQuadratic) out -= 0.1 * w.array().square();
    return out.matrix();
}

Eigen::VectorXd CompetitionProblem::f_w(const Eigen::VectorXd& w) const {
    Eigen::ArrayXd out = Eigen::ArrayXd::Constant(w.size(), -1.0);
    if (form == GrowthForm::LogisticQuadratic) out -= 0.2 * w.array();
    return out.matrix();
}

double CompetitionProblem::stiffness(double w_max) const {
    const double quad = form == GrowthForm::LogisticQuadratic ? 0.1 : 0.0;
    const double growth = r.cwiseAbs().maxCoeff() + w_max + quad * w_max * w_max;
    const double reaction = w_max * (1.0 + 2.0 * quad * w_max);
    return nu * (1.0 + b.maxCoeff()) + growth + reaction;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> rhs_competition(const CompetitionProblem& p, const Eigen::VectorXd& u,
                                                            const Eigen::VectorXd& v) {
    if (u.size() != p.r.size() || v.size() != p.r.size())
        throw std::invalid_argument("state does not match the grid");
    const Eigen::VectorXd fw = p.f(u + v);
    Eigen::VectorXd du = p.nu * (p.kmat * u - u) + u.cwiseProduct(fw);
    Eigen::VectorXd dv = p.nu * (p.kmat * v - p.b.cwiseProduct(v)) + v.cwiseProduct(fw);
    return {std::move(du), std::move(dv)};
}

SteadyState steady_state_single(const CompetitionProblem& p, Species which, const SteadyOptions& options) {
    const double lambda0 = which == Species::Dirichlet ? p.assumptions.lambda1 : p.assumptions.lambda2;
    if (!(lambda0 > 0.0)) {
        std::ostringstream os;
        os << "no positive steady state: linearization at zero has principal point " << lambda0;
        throw std::invalid_argument(os.str());
    }
    const Eigen::VectorXd c = loss(p, which);
    const double r_top = std::max(p.r.maxCoeff(), 0.0);
    Eigen::VectorXd u = Eigen::VectorXd::Constant(p.r.size(), options.initial_level * std::max(r_top, 1e-3));
    const double dt = 0.25 / p.stiffness(std::max(r_top, u.maxCoeff()));
    const auto rhs = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return rhs_single(p, c, x); };

    SteadyState out;
    double res = rhs(u).cwiseAbs().maxCoeff();
    long step = 0;
    while (res > 1e-6 && step * dt < options.t_max) {
        u = detail::rk4_step(rhs, u, dt);
        ++step;
        if (step % 50 == 0) {
            if (!u.allFinite() || u.minCoeff() <= 0.0) throw NumericalError("steady-state integration lost positivity");
            res = rhs(u).cwiseAbs().maxCoeff();
        }
    }
    out.time = step * dt;

    // Damped fixed point u <- u + 0.5 R(u) / D.
    double best = res;
    int since_best = 0;
    const double off = p.nu * (p.kmat.rowwise().sum() - p.kmat.diagonal()).maxCoeff();
    for (int it = 0; it < options.max_polish; ++it) {
        const Eigen::VectorXd R = rhs(u);
        res = R.cwiseAbs().maxCoeff();
        if (res < best * (1.0 - 1e-3)) {
            best = res;
            since_best = 0;
        } else if (++since_best > 2000) {
            break;
        }
        if (res <= 1e-3 * options.residual_tol) break;
        const Eigen::VectorXd diag =
            p.nu * (p.kmat.diagonal() - c) + p.f(u) + u.cwiseProduct(p.f_w(u));
        const double D = std::max(diag.cwiseAbs().maxCoeff(), 0.5 * (diag.cwiseAbs().maxCoeff() + off));
        u += (0.5 / D) * R;
        out.polish_iterations = it + 1;
        if (!u.allFinite() || u.minCoeff() <= 0.0) throw NumericalError("steady-state polish lost positivity");
    }
    out.residual = rhs(u).cwiseAbs().maxCoeff();
    if (!(out.residual <= options.residual_tol)) {
        std::ostringstream os;
        os << "steady-state residual stalled at " << out.residual;
        throw NumericalError(os.str());
    }
    out.values = std::move(u);
    return out;
}

double competition_stability_bound(const CompetitionProblem& p, double w_max) {
    return 0.5 / p.stiffness(w_max);
}

namespace {

CompetitionDiagnostics diagnose(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::VectorXd* v_star) {
    CompetitionDiagnostics d;
    d.u_sup = u.cwiseAbs().maxCoeff();
    d.v_sup = v.cwiseAbs().maxCoeff();
    d.u_min = u.minCoeff();
    d.v_min = v.minCoeff();
    d.v_residual = v_star ? (v - *v_star).cwiseAbs().maxCoeff() : std::numeric_limits<double>::quiet_NaN();
    return d;
}

}  // namespace

CompetitionTrajectory simulate_competition(const CompetitionProblem& p, const Eigen::VectorXd& u0,
                                           const Eigen::VectorXd& v0, double T, const CompetitionOptions& options,
                                           const Eigen::VectorXd* v_star) {
    const auto m = p.r.size();
    if (u0.size() != m || v0.size() != m) throw std::invalid_argument("initial state does not match the grid");
    if (u0.minCoeff() < 0.0 || v0.minCoeff() < 0.0) throw std::invalid_argument("initial data must be nonnegative");
    if (!(T > 0.0)) throw std::invalid_argument("final time must be positive");
    const double w_max = std::max((u0 + v0).maxCoeff(), std::max(p.r.maxCoeff(), 0.0));
    const double bound = competition_stability_bound(p, w_max);
    double dt = options.dt > 0.0 ? options.dt : 0.5 * bound;
    if (dt > bound * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "time step " << dt << " exceeds the stability bound " << bound;
        throw std::invalid_argument(os.str());
    }
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(T / dt - 1e-12)));
    dt = T / static_cast<double>(steps);

    // Stack (u, v) so the generic step applies.
    Eigen::VectorXd y(2 * m);
    y << u0, v0;
    const auto rhs = [&](const Eigen::VectorXd& s) -> Eigen::VectorXd {
        auto [du, dv] = rhs_competition(p, s.head(m), s.tail(m));
        Eigen::VectorXd out(2 * m);
        out << du, dv;
        return out;
    };
    const double floor = -options.positivity_tol * std::max(1.0, w_max);
    const int stride = std::max(1, options.capture_stride);

    CompetitionTrajectory tr;
    tr.dt = dt;
    auto capture = [&](double t) {
        tr.times.push_back(t);
        tr.u_states.push_back(y.head(m));
        tr.v_states.push_back(y.tail(m));
        tr.diagnostics.push_back(diagnose(tr.u_states.back(), tr.v_states.back(), v_star));
    };
    capture(0.0);
    for (long s = 1; s <= steps; ++s) {
        y = detail::rk4_step(rhs, y, dt);
        if (!y.allFinite()) {
            std::ostringstream os;
            os << "non-finite competition state at t = " << s * dt;
            throw NumericalError(os.str());
        }
        if (y.minCoeff() < floor) {
            std::ostringstream os;
            os << "competition state turned negative at t = " << s * dt << ": " << y.minCoeff();
            throw NumericalError(os.str());
        }
        tr.steps = static_cast<int>(s);
        if (s % stride == 0 || s == steps) {
            capture(s * dt);
            if (options.stop_below > 0.0 && v_star) {
                const auto& d = tr.diagnostics.back();
                if (d.u_sup < options.stop_below && d.v_residual < options.stop_below) break;
            }
        }
    }
    return tr;
}

namespace {

bool non_increasing_tail(const std::vector<double>& times, const std::vector<double>& metric) {
    if (times.size() < 2) return false;
    const double start = 0.8 * times.back();
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i - 1] < start) continue;
        if (metric[i] > metric[i - 1]) return false;
    }
    return true;
}

ExclusionVerdict judge(const std::vector<double>& times, const std::vector<double>& extinct,
                       const std::vector<double>& residual, double tol) {
    ExclusionVerdict v;
    v.final_u_sup = extinct.back();
    v.final_v_residual = residual.back();
    v.u_monotone = non_increasing_tail(times, extinct);
    v.v_monotone = non_increasing_tail(times, residual);
    if (!(v.final_u_sup < tol)) v.failing_metric = "final_extinct_sup";
    else if (!(v.final_v_residual < tol)) v.failing_metric = "final_residual_sup";
    else if (!v.u_monotone) v.failing_metric = "extinct_sup_not_monotone";
    else if (!v.v_monotone) v.failing_metric = "residual_not_monotone";
    v.pass = v.failing_metric.empty();
    return v;
}

}  // namespace

ExclusionVerdict verify_exclusion(const CompetitionTrajectory& trajectory, const Eigen::VectorXd& target,
                                  double tol) {
    if (trajectory.times.empty()) throw std::invalid_argument("empty trajectory");
    std::vector<double> a, b;
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        a.push_back(trajectory.u_states[i].cwiseAbs().maxCoeff());
        b.push_back((trajectory.v_states[i] - target).cwiseAbs().maxCoeff());
    }
    return judge(trajectory.times, a, b, tol);
}

ExclusionVerdict verify_exclusion_swapped(const CompetitionTrajectory& trajectory, const Eigen::VectorXd& target,
                                          double tol) {
    if (trajectory.times.empty()) throw std::invalid_argument("empty trajectory");
    std::vector<double> a, b;
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        a.push_back(trajectory.v_states[i].cwiseAbs().maxCoeff());
        b.push_back((trajectory.u_states[i] - target).cwiseAbs().maxCoeff());
    }
    return judge(trajectory.times, a, b, tol);
}

CompetitionTrajectory run_exclusion(const CompetitionProblem& p, const Eigen::VectorXd& u0,
                                    const Eigen::VectorXd& v0, const Eigen::VectorXd& v_star,
                                    CompetitionOptions options, double t_cap) {
    const double rate = std::abs(p.assumptions.lambda2);
    const double horizon = rate > 0.0 ? std::min(t_cap, 2000.0 / rate) : t_cap;
    return simulate_competition(p, u0, v0, horizon, options, &v_star);
}

}  // namespace nlds
