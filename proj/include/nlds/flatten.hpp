#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "nlds/coefficients.hpp"
#include "nlds/grid.hpp"
#include "nlds/kernels.hpp"

namespace nlds {

struct FlattenResult {
    CoefficientField field;
    std::size_t center = 0;        // node index of the plateau center
    double plateau_radius = 0.0;   // radius on which h is constant after mollification
    double mollifier_radius = 0.0;
    double sup_distance = 0.0;     // max_j |a_j - a^eps_j|
};

/// True when h attains its max at a node whose neighbours (one step along
/// every axis, diagonals included) all carry the same value to `rel_tol`,
/// and the whole 3-per-axis block lies inside the grid (wrapping on periodic grids).
bool has_flat_interior_max(const Eigen::VectorXd& h, const Grid& grid, double rel_tol = 1e-13);

/// Perturb a by less than epsilon (sup norm) so that the h built from it has
/// a flat interior maximum. Steps: lift h by (eps/3) times a bump near the max
/// at an interior point, replace a ball around the new argmax by a plateau,
/// then mollify with a normalized bump stencil (constant continuation past
/// the box edges). Throws std::invalid_argument when the plateau cannot
/// cover three nodes per axis at this resolution.
FlattenResult mollify_flatten(const CoefficientField& a, double epsilon, const Grid& grid,
                              const DispersalKernel& kernel, double nu);

}  // namespace nlds
