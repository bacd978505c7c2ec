#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nlds/coefficients.hpp"
#include "nlds/kernels.hpp"
#include "nlds/operators.hpp"

namespace nlds {

/// Largest accepted step, 1/(2 max|A_jj|); infinite for a zero diagonal.
double stability_bound(const OperatorMatrix& A);
/// 0.25 / max(max|A_jj|, ||A||_inf / 2).
double default_time_step(const OperatorMatrix& A);

struct EvolutionOptions {
    double dt = 0.0;          // 0 selects default_time_step
    int capture_stride = 10;  // steps between captured states
    bool capture = true;
    double positivity_tol = 1e-10;
};

struct EvolutionState {
    double time = 0.0;
    Eigen::VectorXd values;
    std::string grid_ref;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
};

struct EvolutionResult {
    EvolutionState final_state;
    Trajectory trajectory;  // includes t = 0 and t = T when capturing
    int steps = 0;
    double dt = 0.0;
};

/// Integrates u' = A u to time T with the classical 4th-order step. The step
/// is shrunk so that a whole number of steps lands on T. Nonnegative initial
/// data must stay above -positivity_tol * max(1, sup u0); otherwise a
/// NumericalError is thrown.
EvolutionResult evolve_linear(const OperatorMatrix& A, const Eigen::VectorXd& u0, double T,
                              const EvolutionOptions& options = {});

struct OrderViolation {
    double time = 0.0;
    std::size_t node = 0;
    double amount = 0.0;  // u_low - u_high at the offending node
};

struct ComparisonVerdict {
    bool ordered = true;         // u1 <= u2 + tol at every captured time
    bool strict_at_end = false;  // u1 < u2 at every node at t = T
    bool initially_equal = false;
    bool pass = false;
    double min_final_gap = 0.0;
    std::optional<OrderViolation> violation;
};

ComparisonVerdict check_comparison(const OperatorMatrix& A, const Eigen::VectorXd& u1_0,
                                   const Eigen::VectorXd& u2_0, double T,
                                   const EvolutionOptions& options = {});

/// Evolves the same u0 under a1 <= a2 and checks the solutions stay ordered.
ComparisonVerdict check_coefficient_comparison(const Grid& grid, const DispersalKernel& kernel, double nu,
                                               const CoefficientField& a1, const CoefficientField& a2,
                                               const Eigen::VectorXd& u0, double T,
                                               const EvolutionOptions& options = {});

}  // namespace nlds
