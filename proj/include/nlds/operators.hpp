#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "nlds/coefficients.hpp"
#include "nlds/grid.hpp"
#include "nlds/kernels.hpp"

namespace nlds {

enum class OperatorKind { Dispersal, U, V, Averaged };

std::string to_string(OperatorKind kind);

/// Dense discrete operator on the grid nodes.
struct OperatorMatrix {
    Eigen::MatrixXd entries;
    Boundary bc = Boundary::Dirichlet;
    double nu = 0.0;
    std::optional<double> alpha;
    OperatorKind kind = OperatorKind::Dispersal;
    std::string grid_ref;
    Eigen::VectorXd h_values;
    Eigen::VectorXd weights;
    bool symmetric_kernel = false;

    Eigen::Index size() const { return entries.rows(); }
    double h_max() const { return h_values.maxCoeff(); }
    double h_min() const { return h_values.minCoeff(); }
};

/// Nystrom kernel matrix Kmat_jl = w_l k(x_l - x_j) / m, where m is the
/// lattice mass of k at the grid spacing (so a full interior row sums to one).
/// Periodic grids take the periodized kernel evaluated at min-image offsets.
Eigen::MatrixXd kernel_matrix(const Grid& grid, const DispersalKernel& kernel);

/// h = -nu + a (Dirichlet, periodic) or h = -nu b + a with b_j = sum_l Kmat_jl (Neumann).
Eigen::VectorXd h_field(const Grid& grid, const DispersalKernel& kernel, double nu, const CoefficientField& a);
Eigen::VectorXd h_field(Boundary bc, double nu, const CoefficientField& a, const Eigen::MatrixXd& kmat);

/// Everything the dispersal, U and V assemblies share; built once per
/// (grid, kernel, nu, a) so root-finding in alpha only rescales columns.
struct DispersalProblem {
    Grid grid;
    Eigen::MatrixXd kmat;
    Eigen::VectorXd h;
    double nu = 0.0;
    bool symmetric_kernel = false;

    static DispersalProblem make(const Grid& grid, const DispersalKernel& kernel, double nu,
                                 const CoefficientField& a);
    double h_max() const { return h.maxCoeff(); }
};

OperatorMatrix assemble_dispersal(const DispersalProblem& p);
OperatorMatrix assemble_U(const DispersalProblem& p, double alpha);
OperatorMatrix assemble_V(const DispersalProblem& p, double alpha);

OperatorMatrix assemble_dispersal(const Grid& grid, const DispersalKernel& kernel, double nu,
                                  const CoefficientField& a);
OperatorMatrix assemble_U(const Grid& grid, const DispersalKernel& kernel, double nu,
                          const CoefficientField& a, double alpha);
OperatorMatrix assemble_V(const Grid& grid, const DispersalKernel& kernel, double nu,
                          const CoefficientField& a, double alpha);

/// nu * (1/|D|) int_D u + (-nu + a) u.
OperatorMatrix assemble_averaged(const Grid& grid, double nu, const CoefficientField& a);

/// Row-major dump, one row per line, full-precision scientific notation.
void write_matrix(const OperatorMatrix& op, std::ostream& os, char delimiter = ',');

}  // namespace nlds
