#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "nlds/coefficients.hpp"
#include "nlds/errors.hpp"
#include "nlds/evolution.hpp"
#include "nlds/operators.hpp"

using namespace nlds;
using testing::line;
using testing::unit;

namespace {

Eigen::VectorXd bump_state(const Grid& g, double centre, double width) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double z = (g.node(j)[0] - centre) / width;
        if (std::abs(z) < 1.0) u[static_cast<Eigen::Index>(j)] = std::exp(1.0 - 1.0 / (1.0 - z * z));
    }
    return u;
}

}  // namespace

TEST_CASE("Neumann flow keeps constants fixed when a = 0") {
    const Grid g = line(64, Boundary::Neumann);
    const auto A = assemble_dispersal(g, Kernel(Profile::Bump, 1, 0.3), 1.0, CoefficientField::sample(g, forms::constant(0.0)));
    const auto r = evolve_linear(A, Eigen::VectorXd::Ones(64), 5.0);
    CHECK((r.final_state.values.array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK(r.trajectory.times.front() == 0.0);
    CHECK(r.trajectory.times.back() == doctest::Approx(5.0));
    CHECK(r.final_state.time == doctest::Approx(5.0));
}

TEST_CASE("integrator against the matrix exponential") {
    const Grid g = line(64, Boundary::Periodic);
    const auto A = assemble_dispersal(g, make_dispersal_kernel(Kernel(Profile::TriangleTensor, 1, 0.4), g), 2.0,
                                      CoefficientField::sample(g, forms::cosine(unit(), 0.7)));
    const Eigen::VectorXd u0 = bump_state(g, 0.3, 0.2) + Eigen::VectorXd::Constant(64, 0.1);
    const Eigen::VectorXd exact = A.entries.exp() * u0;
    EvolutionOptions eo;
    eo.dt = 0.01;
    eo.capture = false;
    CHECK((evolve_linear(A, u0, 1.0, eo).final_state.values - exact).cwiseAbs().maxCoeff() < 1e-8);
    double prev = 0.0;
    for (double dt : {0.08, 0.04, 0.02}) {
        eo.dt = dt;
        const double e = (evolve_linear(A, u0, 1.0, eo).final_state.values - exact).cwiseAbs().maxCoeff();
        if (prev > 0.0) CHECK(std::log2(prev / e) > 3.5);
        prev = e;
    }
}

TEST_CASE("step is shrunk to land on T and steps above the bound are refused") {
    const Grid g = line(32, Boundary::Dirichlet);
    const auto A = assemble_dispersal(g, Kernel(Profile::TriangleTensor, 1, 0.3), 1.0,
                                      CoefficientField::sample(g, forms::constant(0.0)));
    EvolutionOptions eo;
    eo.dt = 0.3;
    const auto r = evolve_linear(A, Eigen::VectorXd::Ones(32), 1.0, eo);
    CHECK(r.steps == 4);
    CHECK(r.dt == doctest::Approx(0.25));
    eo.dt = 10.0 * stability_bound(A);
    CHECK_THROWS(evolve_linear(A, Eigen::VectorXd::Ones(32), 1.0, eo));
    CHECK(default_time_step(A) <= stability_bound(A));
}

TEST_CASE("zero versus a bump: strict positivity spreads everywhere") {
    for (Boundary bc : {Boundary::Neumann, Boundary::Periodic}) {
        const Grid g = line(64, bc);
        const auto A = assemble_dispersal(g, make_dispersal_kernel(Kernel(Profile::Bump, 1, 0.2), g), 1.0,
                                          CoefficientField::sample(g, forms::sine(unit(), 0.3)));
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(64);
        const auto v = check_comparison(A, zero, bump_state(g, 0.5, 0.1), 2.0);
        CHECK(v.pass);
        CHECK(v.ordered);
        CHECK(v.strict_at_end);
        CHECK(v.min_final_gap > 0.0);
        CHECK_FALSE(v.violation);
        const auto z = evolve_linear(A, zero, 2.0);
        CHECK(z.final_state.values.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("equal data is reported as equal, unordered data is rejected") {
    const Grid g = line(32, Boundary::Neumann);
    const auto A = assemble_dispersal(g, Kernel(Profile::Bump, 1, 0.2), 1.0, CoefficientField::sample(g, forms::constant(0.0)));
    const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(32, 0.0, 1.0);
    const auto v = check_comparison(A, u, u, 1.0);
    CHECK(v.initially_equal);
    CHECK(v.pass);
    CHECK_THROWS(check_comparison(A, u, u - Eigen::VectorXd::Constant(32, 0.1), 1.0));
}

TEST_CASE("randomized ordered coefficient pairs keep solutions ordered") {
    Rng rng(11);
    const Boundary bcs[] = {Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic};
    for (int i = 0; i < 50; ++i) {
        const Grid g = line(32, bcs[i % 3]);
        const auto dk = make_dispersal_kernel(Kernel(Profile::TriangleTensor, 1, rng.uniform(0.1, 0.6)), g);
        const auto a1 = CoefficientField::sample(g, forms::random_fourier(unit(), rng, 3, 0.7));
        const double c = rng.uniform(0.0, 0.3);
        const auto d = CoefficientField::sample(g, forms::random_fourier(unit(), rng, 2, c, c));
        const CoefficientField a2(g, a1.values() + d.values());
        Eigen::VectorXd u0(32);
        for (int j = 0; j < 32; ++j) u0[j] = rng.uniform(0.0, 1.0);
        CHECK(check_coefficient_comparison(g, dk, rng.uniform(0.2, 2.0), a1, a2, u0, 1.0).pass);
    }
}
