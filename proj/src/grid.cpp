#include "nlds/grid.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nlds {

std::string to_string(Boundary bc) {
    switch (bc) {
        case Boundary::Dirichlet: return "dirichlet";
        case Boundary::Neumann: return "neumann";
        case Boundary::Periodic: return "periodic";
    }
    return "unknown";
}

Boundary boundary_from_string(const std::string& name) {
    if (name == "dirichlet") return Boundary::Dirichlet;
    if (name == "neumann") return Boundary::Neumann;
    if (name == "periodic") return Boundary::Periodic;
    throw std::invalid_argument("unknown boundary condition '" + name +
                                "' (expected dirichlet, neumann or periodic)");
}

BoxDomain::BoxDomain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size())
        throw std::invalid_argument("box bounds have mismatched dimensions");
    if (lower_.empty() || lower_.size() > 2)
        throw std::invalid_argument("only 1D and 2D boxes are supported");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(upper_[i] > lower_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
            throw std::invalid_argument("box axis " + std::to_string(i) + " has zero or negative size");
    }
}

double BoxDomain::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= extent(i);
    return v;
}

Grid::Grid(BoxDomain domain, std::vector<int> nodes_per_axis, Boundary bc)
    : domain_(std::move(domain)), nodes_per_axis_(std::move(nodes_per_axis)), bc_(bc) {
    const int n_dim = domain_.dim();
    if (static_cast<int>(nodes_per_axis_.size()) != n_dim)
        throw std::invalid_argument("nodes_per_axis must have one entry per axis");
    cell_volume_ = 1.0;
    for (int a = 0; a < n_dim; ++a) {
        if (nodes_per_axis_[a] < 2)
            throw std::invalid_argument("each axis needs at least 2 nodes");
        spacing_[a] = domain_.extent(a) / nodes_per_axis_[a];
        cell_volume_ *= spacing_[a];
    }
    const int n0 = nodes_per_axis_[0];
    const int n1 = n_dim == 2 ? nodes_per_axis_[1] : 1;
    nodes_.reserve(static_cast<std::size_t>(n0) * n1);
    for (int i0 = 0; i0 < n0; ++i0) {
        for (int i1 = 0; i1 < n1; ++i1) {
            Point p{domain_.lower()[0] + (i0 + 0.5) * spacing_[0], 0.0};
            if (n_dim == 2) p[1] = domain_.lower()[1] + (i1 + 0.5) * spacing_[1];
            nodes_.push_back(p);
        }
    }
    weights_.assign(nodes_.size(), cell_volume_);
}

Grid Grid::build(const BoxDomain& domain, std::vector<int> nodes_per_axis, Boundary bc) {
    return Grid(domain, std::move(nodes_per_axis), bc);
}

Point Grid::periods() const {
    Point p{0.0, 0.0};
    for (int a = 0; a < dim(); ++a) p[a] = domain_.extent(a);
    return p;
}

std::array<int, 2> Grid::multi_index(std::size_t j) const {
    if (dim() == 1) return {static_cast<int>(j), 0};
    const auto n1 = static_cast<std::size_t>(nodes_per_axis_[1]);
    return {static_cast<int>(j / n1), static_cast<int>(j % n1)};
}

std::size_t Grid::flat_index(int i0, int i1) const {
    if (dim() == 1) return static_cast<std::size_t>(i0);
    return static_cast<std::size_t>(i0) * nodes_per_axis_[1] + i1;
}

Grid Grid::refined(int factor) const {
    if (factor < 1) throw std::invalid_argument("refinement factor must be >= 1");
    std::vector<int> n = nodes_per_axis_;
    for (int& v : n) v *= factor;
    return Grid(domain_, std::move(n), bc_);
}

Grid Grid::with_bc(Boundary bc) const {
    Grid g = *this;
    g.bc_ = bc;
    return g;
}

double Grid::integrate(std::span<const double> values) const {
    if (values.size() != size()) throw std::invalid_argument("integrand size does not match grid");
    // Uniform weights: factor the cell volume out of the sum.
    double s = std::accumulate(values.begin(), values.end(), 0.0);
    return s * cell_volume_;
}

std::string Grid::label() const {
    std::ostringstream os;
    os << to_string(bc_) << ":";
    for (int a = 0; a < dim(); ++a) {
        if (a) os << "x";
        os << "[" << domain_.lower()[a] << "," << domain_.upper()[a] << "]/" << nodes_per_axis_[a];
    }
    return os.str();
}

Point min_image_displacement(const Grid& grid, const Point& x, const Point& y) {
    if (grid.bc() != Boundary::Periodic)
        throw std::invalid_argument("min_image_displacement requires a periodic grid");
    Point d{0.0, 0.0};
    const Point p = grid.periods();
    for (int a = 0; a < grid.dim(); ++a) {
        double v = y[a] - x[a];
        v -= p[a] * std::floor(v / p[a] + 0.5);
        if (v >= 0.5 * p[a]) v -= p[a];
        d[a] = v;
    }
    return d;
}

}  // namespace nlds
