#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nlds/coefficients.hpp"
#include "nlds/grid.hpp"
#include "nlds/kernels.hpp"

namespace nlds {

/// f(x, w) = r(x) - w, or r(x) - w - 0.1 w^2.
enum class GrowthForm { Logistic, LogisticQuadratic };

std::string to_string(GrowthForm f);
GrowthForm growth_form_from_string(const std::string& name);

struct AssumptionsCheck {
    bool lambda1_positive = false;
    bool f_negative_for_large_w = true;  // both built-in forms, analytically
    bool partial2_negative = true;
    double lambda1 = 0.0;  // principal point of the Dirichlet linearization at 0
    double lambda2 = 0.0;  // same for Neumann
};

/// u_t = nu(K u - u) + u f(x, u+v),  v_t = nu(K v - b v) + v f(x, u+v)
/// on a non-periodic box with one shared symmetric kernel.
struct CompetitionProblem {
    Grid grid;
    Eigen::MatrixXd kmat;
    Eigen::VectorXd b;  // row sums of kmat
    double nu = 0.0;
    Eigen::VectorXd r;  // f(., 0)
    std::string r_name;
    GrowthForm form = GrowthForm::Logistic;
    AssumptionsCheck assumptions;

    static CompetitionProblem make(const Grid& grid, const Kernel& kernel, double nu, const CoefficientField& r,
                                   GrowthForm form = GrowthForm::Logistic);

    Eigen::VectorXd f(const Eigen::VectorXd& w) const;
    Eigen::VectorXd f_w(const Eigen::VectorXd& w) const;
    /// Largest |diagonal| of the coupled Jacobian over states with 0 <= u+v <= w_max.
    double stiffness(double w_max) const;
};

std::pair<Eigen::VectorXd, Eigen::VectorXd> rhs_competition(const CompetitionProblem& p, const Eigen::VectorXd& u,
                                                            const Eigen::VectorXd& v);

enum class Species { Dirichlet, Neumann };

struct SteadyState {
    Eigen::VectorXd values;
    double residual = 0.0;
    double time = 0.0;
    int polish_iterations = 0;
};

struct SteadyOptions {
    double residual_tol = 1e-8;
    double initial_level = 0.1;  // constant start, scaled by max r
    double t_max = 5000.0;
    int max_polish = 200000;
};

/// Single-species steady state (the other species absent), by long-time
/// integration followed by a damped fixed-point polish.
SteadyState steady_state_single(const CompetitionProblem& p, Species which, const SteadyOptions& options = {});

struct CompetitionDiagnostics {
    double u_sup = 0.0;
    double v_sup = 0.0;
    double u_min = 0.0;
    double v_min = 0.0;
    double v_residual = 0.0;  // sup |v - v*|, NaN without v*
};

struct CompetitionTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> u_states;
    std::vector<Eigen::VectorXd> v_states;
    std::vector<CompetitionDiagnostics> diagnostics;
    double dt = 0.0;
    int steps = 0;
};

struct CompetitionOptions {
    double dt = 0.0;  // 0: 0.25 / stiffness
    int capture_stride = 10;
    double positivity_tol = 1e-10;
    /// Adaptive horizon: stop once sup u and sup|v - v*| are both below this (0 disables).
    double stop_below = 0.0;
};

double competition_stability_bound(const CompetitionProblem& p, double w_max);

CompetitionTrajectory simulate_competition(const CompetitionProblem& p, const Eigen::VectorXd& u0,
                                           const Eigen::VectorXd& v0, double T,
                                           const CompetitionOptions& options = {},
                                           const Eigen::VectorXd* v_star = nullptr);

struct ExclusionVerdict {
    bool pass = false;
    double final_u_sup = 0.0;
    double final_v_residual = 0.0;
    bool u_monotone = false;
    bool v_monotone = false;
    std::string failing_metric;
};

/// Target (0, target): sup u and sup|v - target| below tol at the end, both
/// non-increasing over the final 20% of the captured times.
ExclusionVerdict verify_exclusion(const CompetitionTrajectory& trajectory, const Eigen::VectorXd& target,
                                  double tol);
/// The same test with the roles of the species swapped (u -> target, v -> 0).
ExclusionVerdict verify_exclusion_swapped(const CompetitionTrajectory& trajectory, const Eigen::VectorXd& target,
                                          double tol);

/// Integrates until both exclusion diagnostics fall below options.stop_below
/// or until 2000 / |lambda2| (at most t_cap).
CompetitionTrajectory run_exclusion(const CompetitionProblem& p, const Eigen::VectorXd& u0,
                                    const Eigen::VectorXd& v0, const Eigen::VectorXd& v_star,
                                    CompetitionOptions options, double t_cap = 1e4);

}  // namespace nlds
