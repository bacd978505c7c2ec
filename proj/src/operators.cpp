#include "nlds/operators.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace nlds {

std::string to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::Dispersal: return "dispersal";
        case OperatorKind::U: return "U";
        case OperatorKind::V: return "V";
        case OperatorKind::Averaged: return "averaged";
    }
    return "unknown";
}

namespace {

void check_compatible(const Grid& grid, const DispersalKernel& kernel) {
    const Kernel& base = base_kernel(kernel);
    if (base.dim() != grid.dim()) throw std::invalid_argument("kernel and grid dimensions differ");
    const auto* periodic = std::get_if<PeriodicKernel>(&kernel);
    if (grid.bc() == Boundary::Periodic) {
        if (!periodic) throw std::invalid_argument("periodic grids need a periodized kernel");
        const Point p = grid.periods();
        for (int a = 0; a < grid.dim(); ++a) {
            if (std::abs(periodic->periods()[a] - p[a]) > 1e-12 * p[a])
                throw std::invalid_argument("kernel periods do not match the grid cell");
        }
    } else if (periodic) {
        throw std::invalid_argument("periodized kernel given for a non-periodic grid");
    }
}

double evaluate(const DispersalKernel& kernel, const Point& z) {
    return std::visit([&](const auto& k) { return k(z); }, kernel);
}

}  // namespace

Eigen::MatrixXd kernel_matrix(const Grid& grid, const DispersalKernel& kernel) {
    check_compatible(grid, kernel);
    const Kernel& base = base_kernel(kernel);
    const int dim = grid.dim();
    const int n0 = grid.nodes_per_axis()[0];
    const int n1 = dim == 2 ? grid.nodes_per_axis()[1] : 1;
    const double h0 = grid.spacing(0);
    const double h1 = dim == 2 ? grid.spacing(1) : 1.0;

    // Uniform grid: k(x_l - x_j) depends only on the index offset.
    const int w0 = 2 * n0 - 1;
    const int w1 = 2 * n1 - 1;
    std::vector<double> table(static_cast<std::size_t>(w0) * w1);
    auto slot = [&](int d0, int d1) -> double& {
        return table[static_cast<std::size_t>(d0 + n0 - 1) * w1 + (d1 + n1 - 1)];
    };
    for (int d0 = -(n0 - 1); d0 <= n0 - 1; ++d0)
        for (int d1 = -(n1 - 1); d1 <= n1 - 1; ++d1)
            slot(d0, d1) = evaluate(kernel, Point{d0 * h0, dim == 2 ? d1 * h1 : 0.0});
    if (base.symmetric()) {
        for (int d0 = -(n0 - 1); d0 <= n0 - 1; ++d0)
            for (int d1 = -(n1 - 1); d1 <= n1 - 1; ++d1) {
                const double s = 0.5 * (slot(d0, d1) + slot(-d0, -d1));
                slot(d0, d1) = s;
                slot(-d0, -d1) = s;
            }
    }

    const double mass = base.lattice_mass({h0, h1});
    const double scale = grid.cell_volume() / mass;
    const auto m = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd k(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto ij = grid.multi_index(static_cast<std::size_t>(j));
        for (Eigen::Index l = 0; l < m; ++l) {
            const auto il = grid.multi_index(static_cast<std::size_t>(l));
            k(j, l) = scale * slot(il[0] - ij[0], il[1] - ij[1]);
        }
    }
    return k;
}

Eigen::VectorXd h_field(Boundary bc, double nu, const CoefficientField& a, const Eigen::MatrixXd& kmat) {
    if (static_cast<Eigen::Index>(a.size()) != kmat.rows())
        throw std::invalid_argument("coefficient size does not match the operator");
    if (bc == Boundary::Neumann) return -nu * kmat.rowwise().sum() + a.values();
    return a.values().array() - nu;
}

Eigen::VectorXd h_field(const Grid& grid, const DispersalKernel& kernel, double nu, const CoefficientField& a) {
    if (grid.bc() != Boundary::Neumann) {
        if (a.size() != grid.size()) throw std::invalid_argument("coefficient size does not match the grid");
        return a.values().array() - nu;
    }
    return h_field(grid.bc(), nu, a, kernel_matrix(grid, kernel));
}

DispersalProblem DispersalProblem::make(const Grid& grid, const DispersalKernel& kernel, double nu,
                                        const CoefficientField& a) {
    if (!(nu > 0.0)) throw std::invalid_argument("dispersal rate nu must be positive");
    if (a.size() != grid.size()) throw std::invalid_argument("coefficient size does not match the grid");
    DispersalProblem p{grid, kernel_matrix(grid, kernel), {}, nu, is_symmetric(kernel)};
    p.h = h_field(grid.bc(), nu, a, p.kmat);
    return p;
}

namespace {

OperatorMatrix shell(const DispersalProblem& p, OperatorKind kind) {
    OperatorMatrix op;
    op.bc = p.grid.bc();
    op.nu = p.nu;
    op.kind = kind;
    op.grid_ref = p.grid.label();
    op.h_values = p.h;
    op.weights = Eigen::Map<const Eigen::VectorXd>(p.grid.weights().data(),
                                                   static_cast<Eigen::Index>(p.grid.size()));
    op.symmetric_kernel = p.symmetric_kernel;
    return op;
}

void check_alpha(const DispersalProblem& p, double alpha) {
    if (!(alpha > p.h_max()))
        throw std::invalid_argument("alpha must exceed max(h) for the U/V operators");
}

}  // namespace

OperatorMatrix assemble_dispersal(const DispersalProblem& p) {
    OperatorMatrix op = shell(p, OperatorKind::Dispersal);
    op.entries = p.nu * p.kmat;
    op.entries.diagonal() += p.h;
    return op;
}

OperatorMatrix assemble_U(const DispersalProblem& p, double alpha) {
    check_alpha(p, alpha);
    OperatorMatrix op = shell(p, OperatorKind::U);
    op.alpha = alpha;
    const Eigen::VectorXd inv = (alpha - p.h.array()).inverse();
    op.entries = p.nu * p.kmat * inv.asDiagonal();
    return op;
}

OperatorMatrix assemble_V(const DispersalProblem& p, double alpha) {
    check_alpha(p, alpha);
    OperatorMatrix op = shell(p, OperatorKind::V);
    op.alpha = alpha;
    const Eigen::VectorXd inv = (alpha - p.h.array()).inverse();
    op.entries = inv.asDiagonal() * (p.nu * p.kmat);
    return op;
}

OperatorMatrix assemble_dispersal(const Grid& grid, const DispersalKernel& kernel, double nu,
                                  const CoefficientField& a) {
    return assemble_dispersal(DispersalProblem::make(grid, kernel, nu, a));
}

OperatorMatrix assemble_U(const Grid& grid, const DispersalKernel& kernel, double nu,
                          const CoefficientField& a, double alpha) {
    return assemble_U(DispersalProblem::make(grid, kernel, nu, a), alpha);
}

OperatorMatrix assemble_V(const Grid& grid, const DispersalKernel& kernel, double nu,
                          const CoefficientField& a, double alpha) {
    return assemble_V(DispersalProblem::make(grid, kernel, nu, a), alpha);
}

OperatorMatrix assemble_averaged(const Grid& grid, double nu, const CoefficientField& a) {
    if (!(nu > 0.0)) throw std::invalid_argument("dispersal rate nu must be positive");
    if (a.size() != grid.size()) throw std::invalid_argument("coefficient size does not match the grid");
    const auto m = static_cast<Eigen::Index>(grid.size());
    OperatorMatrix op;
    op.bc = grid.bc();
    op.nu = nu;
    op.kind = OperatorKind::Averaged;
    op.grid_ref = grid.label();
    op.h_values = a.values().array() - nu;
    op.weights = Eigen::VectorXd::Constant(m, grid.cell_volume());
    op.symmetric_kernel = true;
    op.entries = Eigen::MatrixXd::Constant(m, m, nu * grid.cell_volume() / grid.domain().volume());
    op.entries.diagonal() += op.h_values;
    return op;
}

void write_matrix(const OperatorMatrix& op, std::ostream& os, char delimiter) {
    char buf[32];
    for (Eigen::Index j = 0; j < op.entries.rows(); ++j) {
        for (Eigen::Index l = 0; l < op.entries.cols(); ++l) {
            if (l) os << delimiter;
            std::snprintf(buf, sizeof buf, "%.17e", op.entries(j, l));
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace nlds
