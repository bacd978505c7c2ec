#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nlds {

enum class Boundary { Dirichlet, Neumann, Periodic };

std::string to_string(Boundary bc);
Boundary boundary_from_string(const std::string& name);

/// Points carry two coordinates; the second is unused (zero) in 1D.
using Point = std::array<double, 2>;

/// Axis-aligned box [l_1,r_1] x ... x [l_N,r_N], N in {1,2}.
class BoxDomain {
public:
    BoxDomain(std::vector<double> lower, std::vector<double> upper);

    int dim() const { return static_cast<int>(lower_.size()); }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    double extent(int axis) const { return upper_[axis] - lower_[axis]; }
    double volume() const;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Uniform midpoint-rule grid over a box. Nodes are cell centers stored
/// row-major over axes (axis 0 varies slowest). Immutable once built.
class Grid {
public:
    static Grid build(const BoxDomain& domain, std::vector<int> nodes_per_axis, Boundary bc);

    const BoxDomain& domain() const { return domain_; }
    int dim() const { return domain_.dim(); }
    Boundary bc() const { return bc_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<int>& nodes_per_axis() const { return nodes_per_axis_; }
    const Point& node(std::size_t j) const { return nodes_[j]; }
    const std::vector<Point>& nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    double cell_volume() const { return cell_volume_; }
    double spacing(int axis) const { return spacing_[axis]; }
    /// Periods p_j = upper_j - lower_j; meaningful only for periodic grids.
    Point periods() const;

    std::array<int, 2> multi_index(std::size_t j) const;
    std::size_t flat_index(int i0, int i1 = 0) const;

    /// Same domain and boundary tag with every axis refined by `factor`.
    Grid refined(int factor) const;
    /// Same nodes, different boundary tag.
    Grid with_bc(Boundary bc) const;

    double integrate(std::span<const double> values) const;
    std::string label() const;

private:
    Grid(BoxDomain domain, std::vector<int> nodes_per_axis, Boundary bc);

    BoxDomain domain_;
    std::vector<int> nodes_per_axis_;
    Boundary bc_;
    std::array<double, 2> spacing_{0.0, 0.0};
    double cell_volume_ = 0.0;
    std::vector<Point> nodes_;
    std::vector<double> weights_;
};

/// y - x wrapped by whole periods so every component lies in [-p/2, p/2).
Point min_image_displacement(const Grid& grid, const Point& x, const Point& y);

}  // namespace nlds
