#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "nlds/grid.hpp"
#include "nlds/random.hpp"

namespace nlds {

/// Named closed-form coefficient; re-sampled when the grid is refined.
struct AnalyticForm {
    std::string name;
    std::function<double(const Point&)> eval;
};

struct CoefficientStats {
    double max = 0.0;
    double min = 0.0;
    double mean = 0.0;  // (1/|D|) int_D a, by the grid quadrature
};

CoefficientStats coefficient_stats(const Eigen::VectorXd& values, const Grid& grid);

/// Node samples of a(x) with cached max/min/mean.
class CoefficientField {
public:
    CoefficientField(const Grid& grid, Eigen::VectorXd values, std::string name = "custom");
    static CoefficientField sample(const Grid& grid, AnalyticForm form);

    const Eigen::VectorXd& values() const { return values_; }
    double operator[](std::size_t j) const { return values_[static_cast<Eigen::Index>(j)]; }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
    const CoefficientStats& stats() const { return stats_; }
    const std::string& name() const { return name_; }
    const std::optional<AnalyticForm>& form() const { return form_; }

    /// Re-sample the closed form on another grid; throws for sampled-only fields.
    CoefficientField resample(const Grid& grid) const;
    /// a + c, closed form carried along.
    CoefficientField shifted(double c) const;

private:
    Eigen::VectorXd values_;
    std::string name_;
    std::optional<AnalyticForm> form_;
    CoefficientStats stats_;
};

/// Maps a grid to the coefficient sampled on it, so refinement studies can
/// rebuild derived fields (e.g. flattened coefficients) at each level.
using CoefficientSource = std::function<CoefficientField(const Grid&)>;

CoefficientSource source_of(const AnalyticForm& form);

namespace forms {

AnalyticForm constant(double c);
/// offset + amplitude * prod_a sin(2 pi frequency (x_a - l_a) / L_a)
AnalyticForm sine(const BoxDomain& domain, double amplitude, double frequency = 1.0, double offset = 0.0);
AnalyticForm cosine(const BoxDomain& domain, double amplitude, double frequency = 1.0, double offset = 0.0);
/// offset + slope * (x_0 - l_0)
AnalyticForm linear(const BoxDomain& domain, double slope, double offset = 0.0);
/// Truncated Fourier series in each axis with random coefficients whose
/// absolute values sum to at most `amplitude`. Periodic with the box.
AnalyticForm random_fourier(const BoxDomain& domain, Rng& rng, int modes, double amplitude, double offset = 0.0);

}  // namespace forms

}  // namespace nlds
