#include "nlds/coefficients.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nlds {

CoefficientStats coefficient_stats(const Eigen::VectorXd& values, const Grid& grid) {
    if (static_cast<std::size_t>(values.size()) != grid.size())
        throw std::invalid_argument("coefficient samples do not match the grid");
    CoefficientStats s;
    s.max = values.maxCoeff();
    s.min = values.minCoeff();
    s.mean = grid.integrate(std::span<const double>(values.data(), grid.size())) / grid.domain().volume();
    return s;
}

CoefficientField::CoefficientField(const Grid& grid, Eigen::VectorXd values, std::string name)
    : values_(std::move(values)), name_(std::move(name)) {
    if (!values_.allFinite()) throw std::invalid_argument("coefficient samples must be finite");
    stats_ = coefficient_stats(values_, grid);
}

CoefficientField CoefficientField::sample(const Grid& grid, AnalyticForm form) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t j = 0; j < grid.size(); ++j) v[static_cast<Eigen::Index>(j)] = form.eval(grid.node(j));
    CoefficientField f(grid, std::move(v), form.name);
    f.form_ = std::move(form);
    return f;
}

CoefficientField CoefficientField::resample(const Grid& grid) const {
    if (!form_) throw std::invalid_argument("coefficient '" + name_ + "' has no closed form to re-sample");
    return sample(grid, *form_);
}

CoefficientField CoefficientField::shifted(double c) const {
    CoefficientField f = *this;
    f.values_.array() += c;
    f.stats_.max += c;
    f.stats_.min += c;
    f.stats_.mean += c;
    std::ostringstream os;
    os << name_ << "+" << c;
    f.name_ = os.str();
    if (form_) {
        auto inner = form_->eval;
        f.form_ = AnalyticForm{f.name_, [inner, c](const Point& x) { return inner(x) + c; }};
    }
    return f;
}

CoefficientSource source_of(const AnalyticForm& form) {
    return [form](const Grid& g) { return CoefficientField::sample(g, form); };
}

namespace forms {

namespace {

template <typename F>
AnalyticForm per_axis_product(const BoxDomain& d, std::string name, double amplitude, double offset, F f) {
    const int dim = d.dim();
    std::array<double, 2> lo{d.lower()[0], dim == 2 ? d.lower()[1] : 0.0};
    std::array<double, 2> len{d.extent(0), dim == 2 ? d.extent(1) : 1.0};
    return {std::move(name), [=](const Point& x) {
                double v = 1.0;
                for (int a = 0; a < dim; ++a) v *= f((x[a] - lo[a]) / len[a]);
                return offset + amplitude * v;
            }};
}

}  // namespace

AnalyticForm constant(double c) {
    std::ostringstream os;
    os << "const(" << c << ")";
    return {os.str(), [c](const Point&) { return c; }};
}

AnalyticForm sine(const BoxDomain& domain, double amplitude, double frequency, double offset) {
    std::ostringstream os;
    os << "sine(" << amplitude << "," << frequency << "," << offset << ")";
    return per_axis_product(domain, os.str(), amplitude, offset, [frequency](double s) {
        return std::sin(2.0 * std::numbers::pi * frequency * s);
    });
}

AnalyticForm cosine(const BoxDomain& domain, double amplitude, double frequency, double offset) {
    std::ostringstream os;
    os << "cosine(" << amplitude << "," << frequency << "," << offset << ")";
    return per_axis_product(domain, os.str(), amplitude, offset, [frequency](double s) {
        return std::cos(2.0 * std::numbers::pi * frequency * s);
    });
}

AnalyticForm linear(const BoxDomain& domain, double slope, double offset) {
    std::ostringstream os;
    os << "linear(" << slope << "," << offset << ")";
    const double lo = domain.lower()[0];
    return {os.str(), [=](const Point& x) { return offset + slope * (x[0] - lo); }};
}

AnalyticForm random_fourier(const BoxDomain& domain, Rng& rng, int modes, double amplitude, double offset) {
    if (modes < 1) throw std::invalid_argument("random_fourier needs at least one mode");
    const int dim = domain.dim();
    struct Term {
        int axis;
        int m;
        double c;
        double s;
    };
    std::vector<Term> terms;
    double total = 0.0;
    for (int a = 0; a < dim; ++a) {
        for (int m = 1; m <= modes; ++m) {
            Term t{a, m, rng.uniform(-1.0, 1.0) / m, rng.uniform(-1.0, 1.0) / m};
            total += std::abs(t.c) + std::abs(t.s);
            terms.push_back(t);
        }
    }
    const double scale = total > 0.0 ? amplitude / total : 0.0;
    for (auto& t : terms) {
        t.c *= scale;
        t.s *= scale;
    }
    std::array<double, 2> lo{domain.lower()[0], dim == 2 ? domain.lower()[1] : 0.0};
    std::array<double, 2> len{domain.extent(0), dim == 2 ? domain.extent(1) : 1.0};
    auto shared = std::make_shared<const std::vector<Term>>(std::move(terms));
    std::ostringstream os;
    os << "fourier(" << modes << "," << amplitude << "," << offset << ")";
    return {os.str(), [=](const Point& x) {
                double v = offset;
                for (const auto& t : *shared) {
                    const double th = 2.0 * std::numbers::pi * t.m * (x[t.axis] - lo[t.axis]) / len[t.axis];
                    v += t.c * std::cos(th) + t.s * std::sin(th);
                }
                return v;
            }};
}

}  // namespace forms

}  // namespace nlds
