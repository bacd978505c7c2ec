#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "nlds/kernels.hpp"

using namespace nlds;
using testing::line;

TEST_CASE("cell-centred grid with uniform weights") {
    const Grid g = line(8, Boundary::Neumann);
    CHECK(g.size() == 8);
    CHECK(g.node(0)[0] == doctest::Approx(1.0 / 16));
    CHECK(g.node(7)[0] == doctest::Approx(15.0 / 16));
    double total = 0.0;
    for (double w : g.weights()) total += w;
    CHECK(total == doctest::Approx(1.0));
    const Grid g2 = Grid::build(BoxDomain({0.0, 0.0}, {2.0, 1.0}), {4, 3}, Boundary::Dirichlet);
    CHECK(g2.size() == 12);
    CHECK(g2.cell_volume() == doctest::Approx(2.0 / 12));
    CHECK(g2.flat_index(2, 1) == 7);
    CHECK(g2.multi_index(7) == std::array<int, 2>{2, 1});
    CHECK(g2.refined(2).size() == 48);
    CHECK_THROWS(line(1, Boundary::Neumann));
}

TEST_CASE("boundary names round trip") {
    for (Boundary bc : {Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic})
        CHECK(boundary_from_string(to_string(bc)) == bc);
    CHECK_THROWS(boundary_from_string("robin"));
}

TEST_CASE("kernel profiles integrate to one") {
    for (Profile p : {Profile::Bump, Profile::TriangleTensor, Profile::CosineTensor}) {
        for (int dim : {1, 2}) {
            const Kernel k(p, dim, 0.4);
            // Fine midpoint rule on the support box.
            const int n = dim == 1 ? 20000 : 800;
            const double h = 0.8 / n;
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < (dim == 2 ? n : 1); ++j)
                    s += k(Point{-0.4 + (i + 0.5) * h, dim == 2 ? -0.4 + (j + 0.5) * h : 0.0});
            s *= dim == 2 ? h * h : h;
            CHECK(s == doctest::Approx(1.0).epsilon(1e-5));
        }
    }
}

TEST_CASE("bump normalization constants") {
    CHECK(Kernel(Profile::Bump, 1, 1.0).normalization_constant() == doctest::Approx(2.25228362104358101).epsilon(1e-14));
    CHECK(Kernel(Profile::Bump, 2, 1.0).normalization_constant() == doctest::Approx(2.14356577579223660).epsilon(1e-14));
}

TEST_CASE("kernel support, symmetry and shift") {
    const Kernel k(Profile::TriangleTensor, 1, 0.5);
    CHECK(k.symmetric());
    CHECK(k(Point{0.3, 0.0}) == doctest::Approx(k(Point{-0.3, 0.0})));
    CHECK(k(Point{0.51, 0.0}) == 0.0);
    CHECK(k(Point{0.0, 0.0}) == doctest::Approx(2.0));
    const Kernel s(Profile::TriangleTensor, 1, 0.5, Point{0.2, 0.0});
    CHECK_FALSE(s.symmetric());
    CHECK(s(Point{0.1, 0.0}) == doctest::Approx(2.0));
    CHECK(s(Point{0.0, 0.0}) > 0.0);
    CHECK_THROWS(Kernel(Profile::TriangleTensor, 1, -1.0));
    CHECK_THROWS(Kernel(Profile::TriangleTensor, 1, 0.5, Point{1.0, 0.0}));
}

TEST_CASE("periodized kernel integrates to one over the torus at every node") {
    // Direct summation of the lattice sum against a fine midpoint rule, n = 1024.
    const Grid g = line(1024, Boundary::Periodic);
    for (double delta : {0.1, 0.7, 3.0}) {
        const PeriodicKernel pk = periodize_kernel(Kernel(Profile::Bump, 1, delta), g.periods());
        for (std::size_t j : {std::size_t{0}, std::size_t{511}, std::size_t{1023}}) {
            const double x = g.node(j)[0];
            const int fine = 200000;
            double s = 0.0;
            for (int i = 0; i < fine; ++i) s += pk(Point{(i + 0.5) / fine - x, 0.0});
            CHECK(s / fine == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("periodized kernel matches the explicit image sum") {
    const Kernel k(Profile::TriangleTensor, 1, 1.7);
    const PeriodicKernel pk = periodize_kernel(k, Point{1.0, 0.0});
    for (double z : {-0.4, 0.0, 0.13, 0.5}) {
        double s = 0.0;
        for (int j = -5; j <= 5; ++j) s += k(Point{z + j, 0.0});
        CHECK(pk(Point{z, 0.0}) == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("lattice mass tends to one under refinement") {
    const Kernel k(Profile::Bump, 1, 0.3);
    CHECK(std::abs(k.lattice_mass({1.0 / 64, 1.0}) - 1.0) < 1e-6);
    CHECK(std::abs(k.lattice_mass({1.0 / 1024, 1.0}) - 1.0) < 1e-12);
}
