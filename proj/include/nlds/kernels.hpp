#pragma once

#include <array>
#include <string>
#include <variant>

#include "nlds/grid.hpp"

namespace nlds {

enum class Profile { Bump, TriangleTensor, CosineTensor };

std::string to_string(Profile p);
Profile profile_from_string(const std::string& name);

/// Compactly supported, unit-mass dispersal kernel k_delta(z) = delta^-N kt(z/delta - shift).
///
/// The base profiles kt are
///   bump      C exp(1/(|z|^2 - 1)) on the unit ball,
///   triangle  prod_i (1 - |z_i|)_+,
///   cosine    prod_i (1 + cos(pi z_i))/2 on the unit cube,
/// each normalized so it integrates to one over R^N. A nonzero `shift`
/// (|shift|_inf < 1 so that k(0) > 0) gives an asymmetric kernel.
class Kernel {
public:
    Kernel(Profile profile, int dim, double delta, Point shift = {0.0, 0.0});

    double operator()(const Point& z) const;
    /// Unscaled profile kt evaluated at w (no shift applied).
    double base(const Point& w) const;

    Profile profile() const { return profile_; }
    int dim() const { return dim_; }
    double delta() const { return delta_; }
    const Point& shift() const { return shift_; }
    bool symmetric() const { return shift_[0] == 0.0 && shift_[1] == 0.0; }
    /// Euclidean radius of supp(kt) (unit ball for bump; cube diagonal for tensors).
    double support_radius() const;
    /// Per-axis half-width of supp(k_delta) around the origin, shift included.
    double axis_reach(int axis) const;
    double normalization_constant() const;

    Kernel with_delta(double delta) const { return Kernel(profile_, dim_, delta, shift_); }

    /// Riemann sum of k_delta over the infinite lattice h_1 Z x h_2 Z, times h_1 h_2.
    double lattice_mass(const std::array<double, 2>& spacing) const;

private:
    Profile profile_;
    int dim_;
    double delta_;
    Point shift_;
};

/// Periodization khat(z) = sum_j k(z + (j_1 p_1, ..., j_N p_N)), truncated to
/// the lattice shifts that can reach supp(k).
class PeriodicKernel {
public:
    PeriodicKernel(Kernel base, Point periods);

    double operator()(const Point& z) const;
    const Kernel& base() const { return base_; }
    const Point& periods() const { return periods_; }
    bool symmetric() const { return base_.symmetric(); }
    /// Largest |j_a| summed on each axis.
    std::array<int, 2> max_shift() const { return max_shift_; }

private:
    Kernel base_;
    Point periods_;
    std::array<int, 2> max_shift_{0, 0};
};

PeriodicKernel periodize_kernel(const Kernel& k, const Point& periods);

using DispersalKernel = std::variant<Kernel, PeriodicKernel>;

const Kernel& base_kernel(const DispersalKernel& k);
bool is_symmetric(const DispersalKernel& k);

}  // namespace nlds
