#include "nlds/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nlds/errors.hpp"
#include "nlds/rk4.hpp"

namespace nlds {

double stability_bound(const OperatorMatrix& A) {
    const double d = A.entries.diagonal().cwiseAbs().maxCoeff();
    return d > 0.0 ? 0.5 / d : std::numeric_limits<double>::infinity();
}

double default_time_step(const OperatorMatrix& A) {
    const double d = A.entries.diagonal().cwiseAbs().maxCoeff();
    const double row = A.entries.cwiseAbs().rowwise().sum().maxCoeff();
    const double scale = std::max(d, 0.5 * row);
    return scale > 0.0 ? 0.25 / scale : 1.0;
}

EvolutionResult evolve_linear(const OperatorMatrix& A, const Eigen::VectorXd& u0, double T,
                              const EvolutionOptions& options) {
    if (u0.size() != A.size()) throw std::invalid_argument("initial state does not match the operator");
    if (!(T > 0.0)) throw std::invalid_argument("final time must be positive");
    double dt = options.dt > 0.0 ? options.dt : default_time_step(A);
    if (dt > stability_bound(A) * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "time step " << dt << " exceeds the stability bound " << stability_bound(A);
        throw std::invalid_argument(os.str());
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-12)));
    dt = T / steps;

    const bool nonnegative = u0.minCoeff() >= 0.0;
    const double floor = -options.positivity_tol * std::max(1.0, u0.cwiseAbs().maxCoeff());
    const auto rhs = [&A](const Eigen::VectorXd& u) -> Eigen::VectorXd { return A.entries * u; };

    EvolutionResult result;
    result.dt = dt;
    result.steps = steps;
    Eigen::VectorXd u = u0;
    if (options.capture) {
        result.trajectory.times.push_back(0.0);
        result.trajectory.states.push_back(u);
    }
    const int stride = std::max(1, options.capture_stride);
    for (int s = 1; s <= steps; ++s) {
        u = detail::rk4_step(rhs, u, dt);
        if (!u.allFinite()) {
            std::ostringstream os;
            os << "non-finite state at step " << s << " (t = " << s * dt << ")";
            throw NumericalError(os.str());
        }
        if (nonnegative && u.minCoeff() < floor) {
            Eigen::Index at = 0;
            const double v = u.minCoeff(&at);
            std::ostringstream os;
            os << "positivity lost at t = " << s * dt << ", node " << at << ": " << v;
            throw NumericalError(os.str());
        }
        if (options.capture && (s % stride == 0 || s == steps)) {
            result.trajectory.times.push_back(s * dt);
            result.trajectory.states.push_back(u);
        }
    }
    result.final_state = {T, std::move(u), A.grid_ref};
    return result;
}

namespace {

ComparisonVerdict compare_trajectories(const Trajectory& low, const Trajectory& high, double tol,
                                       bool initially_equal) {
    ComparisonVerdict v;
    v.initially_equal = initially_equal;
    for (std::size_t t = 0; t < low.times.size(); ++t) {
        const Eigen::VectorXd gap = high.states[t] - low.states[t];
        Eigen::Index at = 0;
        const double worst = gap.minCoeff(&at);
        if (worst < -tol && v.ordered) {
            v.ordered = false;
            v.violation = OrderViolation{low.times[t], static_cast<std::size_t>(at), -worst};
        }
    }
    const Eigen::VectorXd final_gap = high.states.back() - low.states.back();
    v.min_final_gap = final_gap.minCoeff();
    v.strict_at_end = v.min_final_gap > 0.0;
    return v;
}

}  // namespace

ComparisonVerdict check_comparison(const OperatorMatrix& A, const Eigen::VectorXd& u1_0,
                                   const Eigen::VectorXd& u2_0, double T, const EvolutionOptions& options) {
    if (u1_0.size() != u2_0.size()) throw std::invalid_argument("initial states differ in size");
    if ((u2_0 - u1_0).minCoeff() < 0.0) throw std::invalid_argument("initial data must satisfy u1 <= u2");
    EvolutionOptions opts = options;
    opts.capture = true;
    const auto r1 = evolve_linear(A, u1_0, T, opts);
    const auto r2 = evolve_linear(A, u2_0, T, opts);
    const double tol = options.positivity_tol;
    const bool equal = (u2_0 - u1_0).cwiseAbs().maxCoeff() == 0.0;
    ComparisonVerdict v = compare_trajectories(r1.trajectory, r2.trajectory, tol, equal);
    v.pass = v.ordered && (equal || v.strict_at_end);
    return v;
}

ComparisonVerdict check_coefficient_comparison(const Grid& grid, const DispersalKernel& kernel, double nu,
                                               const CoefficientField& a1, const CoefficientField& a2,
                                               const Eigen::VectorXd& u0, double T,
                                               const EvolutionOptions& options) {
    if ((a2.values() - a1.values()).minCoeff() < 0.0)
        throw std::invalid_argument("coefficients must satisfy a1 <= a2");
    if (u0.minCoeff() < 0.0) throw std::invalid_argument("initial state must be nonnegative");
    const DispersalProblem p1 = DispersalProblem::make(grid, kernel, nu, a1);
    DispersalProblem p2 = p1;
    p2.h = h_field(grid.bc(), nu, a2, p1.kmat);
    const OperatorMatrix A1 = assemble_dispersal(p1);
    const OperatorMatrix A2 = assemble_dispersal(p2);
    EvolutionOptions opts = options;
    opts.capture = true;
    if (opts.dt <= 0.0) opts.dt = std::min(default_time_step(A1), default_time_step(A2));
    const auto r1 = evolve_linear(A1, u0, T, opts);
    const auto r2 = evolve_linear(A2, u0, T, opts);
    const double tol = options.positivity_tol * std::max(1.0, r2.final_state.values.cwiseAbs().maxCoeff());
    ComparisonVerdict v = compare_trajectories(r1.trajectory, r2.trajectory, tol, a1.values() == a2.values());
    v.pass = v.ordered;
    return v;
}

}  // namespace nlds
