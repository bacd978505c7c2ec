#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nlds/coefficients.hpp"
#include "nlds/operators.hpp"

namespace nlds {

enum class Route { DenseEig, Rayleigh, GrowthRate, RadiusRoot };
enum class Verdict { Exists, DoesNotExistNumerically, Inconclusive };

std::string to_string(Route r);
std::string to_string(Verdict v);

struct SpectralOptions {
    double eps_gap_rel = 1e-6;       // eps_gap = eps_gap_rel * (1 + |h_max|)
    double complex_tol = 1e-8;       // top eigenvalue counted as real below this |Im|
    double tie_tol = 1e-12;          // top two real parts closer than this: Inconclusive
    double positivity_ratio = 1e-8;  // min/max of the eigenfunction for "strictly positive"
};

double eps_gap(double h_max, const SpectralOptions& options = {});

struct SpectralReport {
    double lambda_tilde = 0.0;
    Route route = Route::DenseEig;
    std::optional<Eigen::VectorXd> eigenfunction;  // sup norm 1, positive orientation
    double h_max = 0.0;
    double gap = 0.0;  // lambda_tilde - h_max
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::pair<int, double>> refinement_trace;
    std::string note;

    double min_max_ratio() const;
};

/// Largest real part over the full eigenvalue set of the dense matrix
/// (general real eigensolver); eigenvector by inverse iteration.
SpectralReport principal_point_eig(const OperatorMatrix& A, const SpectralOptions& options = {});

/// max of u^T W A u over W-unit vectors: top eigenvalue of W^{1/2} A W^{-1/2}.
/// Requires a symmetric kernel.
double principal_point_rayleigh(const OperatorMatrix& A);

struct GrowthOptions {
    double dt = 0.0;      // 0 selects default_time_step
    double tol = 1e-10;   // estimated absolute error in lambda
    int max_steps = 400000;
    SpectralOptions spectral;
};

/// Growth rate of the renormalized discrete flow. The per-step amplification g
/// of ||u||_W is mapped back through the step's stability polynomial,
/// R(dt lambda) = g, which removes the O(dt^4) bias of log(g)/dt.
SpectralReport principal_point_growth(const OperatorMatrix& A, double t_horizon, const Eigen::VectorXd& u0,
                                      const GrowthOptions& options = {});

struct PowerOptions {
    double rel_tol = 1e-12;
    int max_iterations = 100000;
    bool verify_dense = false;
};

struct RadiusResult {
    double radius = 0.0;
    double lower = 0.0;  // Collatz-Wielandt bracket
    double upper = 0.0;
    bool converged = false;
    int iterations = 0;
    Eigen::VectorXd vector;
    std::optional<double> dense_radius;
};

/// Perron root of a nonnegative U or V operator by power iteration, stopped
/// when the Collatz-Wielandt bracket min/max (Bx)_i/x_i closes to rel_tol.
RadiusResult radius_positive(const OperatorMatrix& B, const PowerOptions& options = {},
                             const Eigen::VectorXd* start = nullptr);

enum class AuxOperator { U, V };

struct RootOptions {
    double alpha_tol = 1e-10;
    int probes = 8;
    PowerOptions power;
};

struct RootResult {
    std::optional<double> alpha;
    std::vector<std::pair<double, double>> probes;  // (alpha, r) near h_max
    int bisection_steps = 0;
};

/// Bisects r(B_alpha) = 1 using the strict decrease of r in alpha, starting
/// from the probes alpha = h_max + 10^-k (1 + |h_max|), k = 1..probes.
RootResult solve_r_equals_one_detailed(const DispersalProblem& p, AuxOperator which, const RootOptions& options = {});
std::optional<double> solve_r_equals_one(const DispersalProblem& p, AuxOperator which, const RootOptions& options = {});
std::optional<double> solve_r_equals_one(const Grid& grid, const DispersalKernel& kernel, double nu,
                                         const CoefficientField& a, AuxOperator which,
                                         const RootOptions& options = {});

/// r(B_alpha) at every probe alpha = h_max + 10^-k (1 + |h_max|), k = 1..count.
std::vector<std::pair<double, double>> probe_radius(const DispersalProblem& p, AuxOperator which, int count,
                                                    const PowerOptions& options = {});

struct ExistenceOptions {
    SpectralOptions spectral;
    int refinement_levels = 3;
    int refinement_factor = 2;
    double gap_stability = 0.2;  // max relative change of the gap between levels
    int probes = 8;
};

struct ExistenceLevel {
    int nodes = 0;  // nodes along axis 0
    double lambda_tilde = 0.0;
    double h_max = 0.0;
    double gap = 0.0;
    double eps_gap = 0.0;
    double min_max_ratio = 0.0;
    Verdict level_verdict = Verdict::Inconclusive;
};

struct ExistenceEvidence {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<ExistenceLevel> levels;
    std::vector<std::pair<double, double>> probes;  // r(U_{h_max + eps_k}) on the coarsest grid
    std::string reason;
};

/// Heuristic existence decision by gap persistence across grid refinements.
ExistenceEvidence existence_test(const Grid& base, const DispersalKernel& kernel, double nu,
                                 const CoefficientSource& coefficient, const ExistenceOptions& options = {});

/// Root lambda > h_max of (1/|D|) int_D nu / (lambda + nu - a(x)) dx = 1.
double bar_lambda3(double nu, const CoefficientField& a, const Grid& grid, double tol = 1e-10);

}  // namespace nlds
