#include "nlds/flatten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nlds/errors.hpp"
#include "nlds/operators.hpp"

namespace nlds {

namespace {

double distance(const Grid& grid, const Point& x, const Point& y) {
    Point d{y[0] - x[0], y[1] - x[1]};
    if (grid.bc() == Boundary::Periodic) d = min_image_displacement(grid, x, y);
    double s = 0.0;
    for (int a = 0; a < grid.dim(); ++a) s += d[a] * d[a];
    return std::sqrt(s);
}

double distance_to_boundary(const Grid& grid, const Point& x) {
    if (grid.bc() == Boundary::Periodic) return std::numeric_limits<double>::infinity();
    double d = std::numeric_limits<double>::infinity();
    for (int a = 0; a < grid.dim(); ++a) {
        d = std::min(d, x[a] - grid.domain().lower()[a]);
        d = std::min(d, grid.domain().upper()[a] - x[a]);
    }
    return d;
}

double min_extent(const Grid& grid) {
    double e = grid.domain().extent(0);
    if (grid.dim() == 2) e = std::min(e, grid.domain().extent(1));
    return e;
}

double max_spacing(const Grid& grid) {
    double h = grid.spacing(0);
    if (grid.dim() == 2) h = std::max(h, grid.spacing(1));
    return h;
}

double neighbour_reach(const Grid& grid) {
    double s = 0.0;
    for (int a = 0; a < grid.dim(); ++a) s += grid.spacing(a) * grid.spacing(a);
    return std::sqrt(s);
}

// Index of the node offset by (d0, d1); -1 when it leaves a non-periodic grid.
long offset_index(const Grid& grid, std::size_t j, int d0, int d1, bool clamp) {
    auto idx = grid.multi_index(j);
    const int n0 = grid.nodes_per_axis()[0];
    const int n1 = grid.dim() == 2 ? grid.nodes_per_axis()[1] : 1;
    const std::array<int, 2> n{n0, n1};
    std::array<int, 2> t{idx[0] + d0, idx[1] + d1};
    for (int a = 0; a < grid.dim(); ++a) {
        if (grid.bc() == Boundary::Periodic) {
            t[a] = ((t[a] % n[a]) + n[a]) % n[a];
        } else if (t[a] < 0 || t[a] >= n[a]) {
            if (!clamp) return -1;
            t[a] = std::clamp(t[a], 0, n[a] - 1);
        }
    }
    return static_cast<long>(grid.flat_index(t[0], t[1]));
}

double bump_profile(double rho) {
    return rho < 1.0 ? std::exp(1.0 / (rho * rho - 1.0)) : 0.0;
}

}  // namespace

bool has_flat_interior_max(const Eigen::VectorXd& h, const Grid& grid, double rel_tol) {
    if (static_cast<std::size_t>(h.size()) != grid.size())
        throw std::invalid_argument("h samples do not match the grid");
    const double top = h.maxCoeff();
    const double tol = rel_tol * (1.0 + std::abs(top));
    const int r1 = grid.dim() == 2 ? 1 : 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (h[static_cast<Eigen::Index>(j)] < top - tol) continue;
        bool flat = true;
        for (int d0 = -1; d0 <= 1 && flat; ++d0) {
            for (int d1 = -r1; d1 <= r1 && flat; ++d1) {
                const long l = offset_index(grid, j, d0, d1, false);
                // A block touching the box edge is not interior.
                if (l < 0 || h[l] < top - tol) flat = false;
                if (l >= 0 && grid.bc() != Boundary::Periodic) {
                    auto idx = grid.multi_index(static_cast<std::size_t>(l));
                    for (int a = 0; a < grid.dim(); ++a)
                        if (idx[a] == 0 || idx[a] == grid.nodes_per_axis()[a] - 1) flat = false;
                }
            }
        }
        if (flat) return true;
    }
    return false;
}

FlattenResult mollify_flatten(const CoefficientField& a, double epsilon, const Grid& grid,
                              const DispersalKernel& kernel, double nu) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (a.size() != grid.size()) throw std::invalid_argument("coefficient size does not match the grid");
    const auto m = static_cast<Eigen::Index>(grid.size());
    const Eigen::VectorXd h = h_field(grid, kernel, nu, a);
    const Eigen::VectorXd offset = h - a.values();

    if (has_flat_interior_max(h, grid)) {
        FlattenResult r{a, 0, 0.0, 0.0, 0.0};
        Eigen::Index arg = 0;
        h.maxCoeff(&arg);
        r.center = static_cast<std::size_t>(arg);
        return r;
    }

    const double third = epsilon / 3.0;
    const double h_max = h.maxCoeff();

    // Interior point within eps/3 of the max, with room for the lift bump.
    std::size_t lift_center = 0;
    double lift_radius = 0.0;
    if (grid.bc() == Boundary::Periodic) {
        Eigen::Index arg = 0;
        h.maxCoeff(&arg);
        lift_center = static_cast<std::size_t>(arg);
        lift_radius = 0.25 * min_extent(grid);
    } else {
        double margin = 0.25 * min_extent(grid);
        bool found = false;
        while (margin >= 3.0 * max_spacing(grid)) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < grid.size(); ++j) {
                if (distance_to_boundary(grid, grid.node(j)) < margin) continue;
                if (h[static_cast<Eigen::Index>(j)] > best) {
                    best = h[static_cast<Eigen::Index>(j)];
                    lift_center = j;
                }
            }
            if (h_max - best < third) {
                found = true;
                break;
            }
            margin *= 0.5;
        }
        if (!found)
            throw std::invalid_argument("epsilon too small: no interior node within eps/3 of max(h) at this resolution");
        lift_radius = margin;
    }

    Eigen::VectorXd lifted = h;
    const Point& xc = grid.node(lift_center);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double r = distance(grid, xc, grid.node(static_cast<std::size_t>(j)));
        if (r < lift_radius) lifted[j] += third * std::exp(1.0) * bump_profile(r / lift_radius);
    }

    Eigen::Index arg0 = 0;
    const double peak = lifted.maxCoeff(&arg0);
    const auto x0_index = static_cast<std::size_t>(arg0);
    const Point& x0 = grid.node(x0_index);

    // Largest sigma whose ramp cap peak - (eps/3)(r - sigma)/sigma on B(x0, 2 sigma)
    // raises no node by eps/3 or more.
    auto cap_at = [&](double r, double sigma) { return peak - third * std::max(0.0, r - sigma) / sigma; };
    double sigma = grid.bc() == Boundary::Periodic ? 0.2 * min_extent(grid) : 0.5 * distance_to_boundary(grid, x0);
    for (;; sigma *= 0.95) {
        if (sigma < max_spacing(grid))
            throw std::invalid_argument("epsilon too small: plateau does not cover 3 nodes per axis at this resolution");
        bool ok = true;
        for (Eigen::Index j = 0; j < m && ok; ++j) {
            const double r = distance(grid, x0, grid.node(static_cast<std::size_t>(j)));
            if (r <= 2.0 * sigma && cap_at(r, sigma) - lifted[j] >= 0.999 * third) ok = false;
        }
        if (ok) break;
    }

    Eigen::VectorXd plateau = lifted;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double r = distance(grid, x0, grid.node(static_cast<std::size_t>(j)));
        if (r <= 2.0 * sigma) {
            plateau[j] = std::max(plateau[j], cap_at(r, sigma));
        }
    }

    // Mollify, shrinking the stencil until the sup-norm change stays below eps/3.
    const int dim = grid.dim();
    double moll = 0.5 * sigma;
    Eigen::VectorXd smooth;
    double stencil_reach = 0.0;
    for (;;) {
        struct Tap {
            int d0, d1;
            double w;
        };
        std::vector<Tap> taps;
        const int r0 = static_cast<int>(std::ceil(moll / grid.spacing(0)));
        const int r1 = dim == 2 ? static_cast<int>(std::ceil(moll / grid.spacing(1))) : 0;
        double total = 0.0;
        stencil_reach = 0.0;
        for (int d0 = -r0; d0 <= r0; ++d0) {
            for (int d1 = -r1; d1 <= r1; ++d1) {
                const double z0 = d0 * grid.spacing(0);
                const double z1 = dim == 2 ? d1 * grid.spacing(1) : 0.0;
                const double w = bump_profile(std::sqrt(z0 * z0 + z1 * z1) / moll);
                if (w > 0.0) {
                    taps.push_back({d0, d1, w});
                    total += w;
                    stencil_reach = std::max(stencil_reach, std::sqrt(z0 * z0 + z1 * z1));
                }
            }
        }
        for (auto& t : taps) t.w /= total;
        smooth.resize(m);
        for (Eigen::Index j = 0; j < m; ++j) {
            double s = 0.0;
            for (const auto& t : taps) s += t.w * plateau[offset_index(grid, static_cast<std::size_t>(j), t.d0, t.d1, true)];
            smooth[j] = std::min(s, peak);
        }
        if (taps.size() == 1) break;
        if ((smooth - plateau).cwiseAbs().maxCoeff() < third && sigma - stencil_reach > neighbour_reach(grid)) break;
        moll *= 0.5;
    }
    const double flat_radius = sigma - stencil_reach;
    if (!(flat_radius > neighbour_reach(grid)))
        throw std::invalid_argument("epsilon too small: plateau does not cover 3 nodes per axis at this resolution");

    FlattenResult result{CoefficientField(grid, smooth - offset, a.name() + "~flat"), x0_index, flat_radius, moll, 0.0};
    result.sup_distance = (result.field.values() - a.values()).cwiseAbs().maxCoeff();
    if (!(result.sup_distance < epsilon))
        throw NumericalError("flattened coefficient drifted by more than epsilon");
    const Eigen::VectorXd h_new = h_field(grid, kernel, nu, result.field);
    if (!has_flat_interior_max(h_new, grid))
        throw NumericalError("flattened coefficient lacks an interior plateau");
    return result;
}

}  // namespace nlds
