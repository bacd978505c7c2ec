#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "nlds/coefficients.hpp"
#include "nlds/flatten.hpp"
#include "nlds/operators.hpp"
#include "nlds/spectral.hpp"

using namespace nlds;
using testing::line;
using testing::unit;

TEST_CASE("sine coefficient statistics") {
    const Grid g = line(256, Boundary::Neumann);
    const auto a = CoefficientField::sample(g, forms::sine(unit(), 1.0));
    const auto& ref = testing::reference()["secular_sine_nu1_n256"];
    CHECK(a.stats().max == doctest::Approx(ref["a_max"].get<double>()).epsilon(1e-14));
    CHECK(a.stats().min == doctest::Approx(ref["a_min"].get<double>()).epsilon(1e-14));
    CHECK(std::abs(a.stats().mean) < 1e-10);
    CHECK(a.stats().max > 0.9999);
}

TEST_CASE("random Fourier coefficients are bounded and seeded") {
    Rng r1(7), r2(7);
    const Grid g = line(128, Boundary::Periodic);
    const auto a = CoefficientField::sample(g, forms::random_fourier(unit(), r1, 4, 0.3, 1.0));
    const auto b = CoefficientField::sample(g, forms::random_fourier(unit(), r2, 4, 0.3, 1.0));
    CHECK(a.values() == b.values());
    CHECK(a.stats().max <= 1.3 + 1e-12);
    CHECK(a.stats().min >= 0.7 - 1e-12);
    CHECK(a.stats().max - a.stats().min > 1e-3);
}

TEST_CASE("shifted and resampled fields") {
    const Grid g = line(32, Boundary::Neumann);
    const auto a = CoefficientField::sample(g, forms::linear(unit(), 2.0, -1.0));
    const auto s = a.shifted(0.5);
    CHECK(s.stats().max == doctest::Approx(a.stats().max + 0.5));
    const auto r = s.resample(g.refined(2));
    CHECK(r.size() == 64);
    CHECK(r.stats().mean == doctest::Approx(0.5).epsilon(1e-12));
    const CoefficientField raw(g, a.values(), "raw");
    CHECK_THROWS(raw.resample(g.refined(2)));
}

TEST_CASE("flat-maximum construction on a sine, Neumann") {
    const Grid g = line(256, Boundary::Neumann);
    const Kernel k(Profile::TriangleTensor, 1, 0.2);
    const DispersalKernel dk = k;
    const auto a = CoefficientField::sample(g, forms::sine(unit(), 1.0));
    const auto fr = mollify_flatten(a, 0.1, g, dk, 0.5);
    // Direct scan for both properties.
    const double sup = (fr.field.values() - a.values()).cwiseAbs().maxCoeff();
    CHECK(sup < 0.1);
    CHECK(sup == doctest::Approx(fr.sup_distance));
    const Eigen::VectorXd h = h_field(g, dk, 0.5, fr.field);
    Eigen::Index arg;
    const double top = h.maxCoeff(&arg);
    CHECK(arg > 0);
    CHECK(arg < h.size() - 1);
    CHECK(std::abs(h[arg - 1] - top) <= 1e-13 * (1 + std::abs(top)));
    CHECK(std::abs(h[arg + 1] - top) <= 1e-13 * (1 + std::abs(top)));
    CHECK(has_flat_interior_max(h, g));
    CHECK_FALSE(has_flat_interior_max(h_field(g, dk, 0.5, a), g));
}

TEST_CASE("flat-maximum construction rejects grids that are too coarse") {
    const Grid g = line(8, Boundary::Neumann);
    const DispersalKernel dk = Kernel(Profile::TriangleTensor, 1, 0.2);
    CHECK_THROWS_AS(mollify_flatten(CoefficientField::sample(g, forms::sine(unit(), 1.0)), 0.01, g, dk, 0.5),
                    std::invalid_argument);
}

TEST_CASE("Neumann operator annihilates constants when a = 0") {
    for (Profile p : {Profile::Bump, Profile::TriangleTensor}) {
        for (double delta : {0.05, 0.3, 2.0}) {
            const Grid g = line(96, Boundary::Neumann);
            const auto A = assemble_dispersal(g, Kernel(p, 1, delta), 1.7,
                                              CoefficientField::sample(g, forms::constant(0.0)));
            CHECK((A.entries * Eigen::VectorXd::Ones(A.size())).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    const Grid g2 = Grid::build(BoxDomain({0.0, 0.0}, {1.0, 1.0}), {12, 12}, Boundary::Neumann);
    const auto A2 = assemble_dispersal(g2, Kernel(Profile::Bump, 2, 0.3), 1.0,
                                       CoefficientField::sample(g2, forms::constant(0.0)));
    CHECK((A2.entries * Eigen::VectorXd::Ones(A2.size())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Dirichlet operator loses mass at the boundary when a = 0") {
    const Grid g = line(64, Boundary::Dirichlet);
    const auto A = assemble_dispersal(g, Kernel(Profile::TriangleTensor, 1, 0.2), 1.0,
                                      CoefficientField::sample(g, forms::constant(0.0)));
    const Eigen::VectorXd r = A.entries * Eigen::VectorXd::Ones(A.size());
    CHECK(r.maxCoeff() <= 1e-14);
    CHECK(r[0] < -0.3);
    CHECK(r[63] < -0.3);
    CHECK(std::abs(r[32]) < 1e-14);
}

TEST_CASE("Neumann h near the boundary matches the truncated kernel mass") {
    const Grid g = line(64, Boundary::Neumann);
    const DispersalKernel dk = Kernel(Profile::TriangleTensor, 1, 0.3);
    const Eigen::VectorXd h = h_field(g, dk, 1.0, CoefficientField::sample(g, forms::constant(0.0)));
    CHECK(h[0] > -1.0);
    CHECK(h[0] < 0.0);
    // Continuum mass by adaptive quadrature; the lattice version differs at O(spacing).
    const double oracle = testing::reference()["neumann_boundary_mass_n64_triangle_0p3"].get<double>();
    CHECK(std::abs(-h[0] - oracle) < 2e-2);
    CHECK(h[32] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("periodic kernel rows sum to one") {
    const Grid g = line(50, Boundary::Periodic);
    for (double delta : {0.1, 0.9, 4.0}) {
        const auto K = kernel_matrix(g, periodize_kernel(Kernel(Profile::CosineTensor, 1, delta), g.periods()));
        CHECK((K.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("kernel matrix is exactly symmetric for symmetric kernels") {
    const Grid g = line(40, Boundary::Dirichlet);
    const auto K = kernel_matrix(g, Kernel(Profile::Bump, 1, 0.37));
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assembly rejects mismatched inputs") {
    const Grid g = line(16, Boundary::Periodic);
    const auto a = CoefficientField::sample(g, forms::constant(0.0));
    CHECK_THROWS(assemble_dispersal(g, Kernel(Profile::Bump, 1, 0.2), 1.0, a));
    const Grid g8 = line(8, Boundary::Neumann);
    CHECK_THROWS(assemble_dispersal(g8, Kernel(Profile::Bump, 1, 0.2), 1.0, a));
    CHECK_THROWS(assemble_dispersal(g8, Kernel(Profile::Bump, 1, 0.2), -1.0,
                                    CoefficientField::sample(g8, forms::constant(0.0))));
}

TEST_CASE("U and V share the spectral radius") {
    for (Boundary bc : {Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic}) {
        const Grid g = line(48, bc);
        const Kernel k(Profile::TriangleTensor, 1, 0.3);
        const auto p = DispersalProblem::make(g, bc == Boundary::Periodic ? DispersalKernel(periodize_kernel(k, g.periods()))
                                                                          : DispersalKernel(k),
                                              0.8, CoefficientField::sample(g, forms::sine(unit(), 0.4)));
        for (double off : {0.05, 0.5, 3.0}) {
            const double alpha = p.h_max() + off;
            const auto ru = radius_positive(assemble_U(p, alpha));
            const auto rv = radius_positive(assemble_V(p, alpha));
            CHECK(ru.converged);
            CHECK(std::abs(ru.radius - rv.radius) < 1e-8);
            CHECK(ru.lower <= ru.radius);
            CHECK(ru.radius <= ru.upper);
        }
    }
}

TEST_CASE("radius of U for constant a against the closed form") {
    const Grid g = line(64, Boundary::Dirichlet);
    const Kernel k(Profile::TriangleTensor, 1, 0.25);
    const double nu = 1.3, c = 0.4;
    const auto p = DispersalProblem::make(g, k, nu, CoefficientField::sample(g, forms::constant(c)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kernel_matrix(g, k), Eigen::EigenvaluesOnly);
    const double rho = es.eigenvalues().maxCoeff();
    for (double alpha : {p.h_max() + 0.01, p.h_max() + 1.0, 10.0}) {
        const double r = radius_positive(assemble_U(p, alpha)).radius;
        CHECK(r == doctest::Approx(nu * rho / (alpha + nu - c)).epsilon(1e-10));
    }
}

TEST_CASE("radius of U decreases in alpha and vanishes as alpha grows") {
    const Grid g = line(64, Boundary::Neumann);
    const auto p = DispersalProblem::make(g, Kernel(Profile::Bump, 1, 0.3), 1.0,
                                          CoefficientField::sample(g, forms::sine(unit(), 0.5)));
    double prev = std::numeric_limits<double>::infinity();
    for (double off : {1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0}) {
        const double r = radius_positive(assemble_U(p, p.h_max() + off)).radius;
        CHECK(r < prev);
        prev = r;
    }
    CHECK(radius_positive(assemble_U(p, 1e6)).radius < 1e-4);
    CHECK(assemble_U(p, 1e6).entries.lpNorm<Eigen::Infinity>() < 1e-5);
    CHECK_THROWS(assemble_U(p, p.h_max() - 0.1));
}

TEST_CASE("averaged operator is rank one plus diagonal") {
    const Grid g = line(20, Boundary::Periodic);
    const auto a = CoefficientField::sample(g, forms::sine(unit(), 1.0));
    const auto A = assemble_averaged(g, 2.0, a);
    const Eigen::MatrixXd D = A.entries - Eigen::MatrixXd(A.h_values.asDiagonal());
    CHECK((D.array() - 2.0 / 20).abs().maxCoeff() < 1e-15);
}
