#include "nlds/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlds {

namespace {

// 1 / int exp(1/(|z|^2-1)) over the unit ball, N = 1 and N = 2.
constexpr double kBumpNorm1D = 2.25228362104358101049978125556;
constexpr double kBumpNorm2D = 2.14356577579223660100088956288;

}  // namespace

std::string to_string(Profile p) {
    switch (p) {
        case Profile::Bump: return "bump";
        case Profile::TriangleTensor: return "triangle";
        case Profile::CosineTensor: return "cosine";
    }
    return "unknown";
}

Profile profile_from_string(const std::string& name) {
    if (name == "bump") return Profile::Bump;
    if (name == "triangle" || name == "triangle_tensor") return Profile::TriangleTensor;
    if (name == "cosine" || name == "cosine_tensor") return Profile::CosineTensor;
    throw std::invalid_argument("unknown kernel profile '" + name +
                                "' (expected bump, triangle or cosine)");
}

Kernel::Kernel(Profile profile, int dim, double delta, Point shift)
    : profile_(profile), dim_(dim), delta_(delta), shift_(shift) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("kernel dimension must be 1 or 2");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("kernel delta must be positive and finite");
    if (dim == 1) shift_[1] = 0.0;
    // k(0) > 0 requires the origin to stay inside the shifted support.
    const Point minus_shift{-shift_[0], -shift_[1]};
    if (base(minus_shift) <= 0.0)
        throw std::invalid_argument("kernel shift moves the origin out of the support");
}

double Kernel::normalization_constant() const {
    if (profile_ == Profile::Bump) return dim_ == 1 ? kBumpNorm1D : kBumpNorm2D;
    return 1.0;
}

double Kernel::support_radius() const {
    if (profile_ == Profile::Bump) return 1.0;
    return std::sqrt(static_cast<double>(dim_));
}

double Kernel::axis_reach(int axis) const {
    return delta_ * (1.0 + std::abs(shift_[axis]));
}

double Kernel::base(const Point& w) const {
    switch (profile_) {
        case Profile::Bump: {
            const double r2 = w[0] * w[0] + (dim_ == 2 ? w[1] * w[1] : 0.0);
            if (r2 >= 1.0) return 0.0;
            return normalization_constant() * std::exp(1.0 / (r2 - 1.0));
        }
        case Profile::TriangleTensor: {
            double v = 1.0;
            for (int a = 0; a < dim_; ++a) {
                const double t = 1.0 - std::abs(w[a]);
                if (t <= 0.0) return 0.0;
                v *= t;
            }
            return v;
        }
        case Profile::CosineTensor: {
            double v = 1.0;
            for (int a = 0; a < dim_; ++a) {
                if (std::abs(w[a]) >= 1.0) return 0.0;
                v *= 0.5 * (1.0 + std::cos(std::numbers::pi * w[a]));
            }
            return v;
        }
    }
    return 0.0;
}

double Kernel::operator()(const Point& z) const {
    const Point w{z[0] / delta_ - shift_[0], dim_ == 2 ? z[1] / delta_ - shift_[1] : 0.0};
    const double scale = dim_ == 1 ? delta_ : delta_ * delta_;
    return base(w) / scale;
}

double Kernel::lattice_mass(const std::array<double, 2>& spacing) const {
    if (profile_ != Profile::Bump && dim_ == 2) {
        // Tensor profiles factor into per-axis sums.
        double mass = 1.0;
        for (int a = 0; a < 2; ++a) {
            Kernel axis(profile_, 1, delta_, Point{shift_[a], 0.0});
            mass *= axis.lattice_mass({spacing[a], 1.0});
        }
        return mass;
    }
    const int r0 = static_cast<int>(std::ceil(axis_reach(0) / spacing[0])) + 1;
    const int r1 = dim_ == 2 ? static_cast<int>(std::ceil(axis_reach(1) / spacing[1])) + 1 : 0;
    double sum = 0.0;
    for (int i = -r0; i <= r0; ++i) {
        for (int j = -r1; j <= r1; ++j) {
            sum += (*this)(Point{i * spacing[0], j * spacing[1]});
        }
    }
    return sum * spacing[0] * (dim_ == 2 ? spacing[1] : 1.0);
}

PeriodicKernel::PeriodicKernel(Kernel base, Point periods) : base_(std::move(base)), periods_(periods) {
    for (int a = 0; a < base_.dim(); ++a) {
        if (!(periods_[a] > 0.0)) throw std::invalid_argument("periods must be positive");
        // Arguments are min-image, |z_a| <= p_a/2, so |z_a + j p_a| <= reach needs
        // |j| <= reach/p_a + 1/2.
        max_shift_[a] = static_cast<int>(std::ceil(base_.axis_reach(a) / periods_[a] + 0.5));
    }
}

double PeriodicKernel::operator()(const Point& z_in) const {
    const int dim = base_.dim();
    Point z = z_in;
    for (int a = 0; a < dim; ++a) z[a] -= periods_[a] * std::floor(z[a] / periods_[a] + 0.5);
    double sum = 0.0;
    for (int j0 = -max_shift_[0]; j0 <= max_shift_[0]; ++j0) {
        if (dim == 1) {
            sum += base_(Point{z[0] + j0 * periods_[0], 0.0});
            continue;
        }
        for (int j1 = -max_shift_[1]; j1 <= max_shift_[1]; ++j1) {
            sum += base_(Point{z[0] + j0 * periods_[0], z[1] + j1 * periods_[1]});
        }
    }
    return sum;
}

PeriodicKernel periodize_kernel(const Kernel& k, const Point& periods) {
    return PeriodicKernel(k, periods);
}

const Kernel& base_kernel(const DispersalKernel& k) {
    if (const auto* p = std::get_if<PeriodicKernel>(&k)) return p->base();
    return std::get<Kernel>(k);
}

bool is_symmetric(const DispersalKernel& k) { return base_kernel(k).symmetric(); }

}  // namespace nlds
