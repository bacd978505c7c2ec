#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "nlds/competition.hpp"
#include "nlds/operators.hpp"
#include "nlds/spectral.hpp"

using namespace nlds;
using testing::line;
using testing::unit;

namespace {

struct Setup {
    Grid grid = line(256, Boundary::Dirichlet);
    Kernel kernel{Profile::TriangleTensor, 1, 0.3};
    CompetitionProblem p;
    SteadyState u_star, v_star;

    Setup()
        : p(CompetitionProblem::make(grid, kernel, 1.0, CoefficientField::sample(grid, forms::sine(unit(), 0.5, 1.0, 1.0)))),
          u_star(steady_state_single(p, Species::Dirichlet)),
          v_star(steady_state_single(p, Species::Neumann)) {}
};

const Setup& setup() {
    static const Setup s;
    return s;
}

void check_against_oracle(const SteadyState& s, const nlohmann::json& ref) {
    const auto& v = s.values;
    CHECK(std::abs(v.maxCoeff() - ref["steady_max"].get<double>()) < 1e-8);
    CHECK(std::abs(v.minCoeff() - ref["steady_min"].get<double>()) < 1e-8);
    CHECK(std::abs(v.mean() - ref["steady_mean"].get<double>()) < 1e-8);
    const Eigen::Index n = v.size();
    const Eigen::Index idx[] = {0, n / 4, n / 2, 3 * n / 4, n - 1};
    for (int i = 0; i < 5; ++i) CHECK(std::abs(v[idx[i]] - ref["steady_samples"][i].get<double>()) < 1e-8);
}

}  // namespace

TEST_CASE("linearizations at zero match the oracle") {
    const auto& ref = testing::reference()["competition_n256"];
    const auto& s = setup();
    CHECK(s.p.assumptions.lambda1_positive);
    CHECK(std::abs(s.p.assumptions.lambda1 - ref["dirichlet"]["lambda_at_zero"].get<double>()) < 1e-10);
    CHECK(std::abs(s.p.assumptions.lambda2 - ref["neumann"]["lambda_at_zero"].get<double>()) < 1e-10);
}

TEST_CASE("single-species steady states match an independent Newton solve") {
    const auto& ref = testing::reference()["competition_n256"];
    const auto& s = setup();
    CHECK(s.u_star.residual < 1e-8);
    CHECK(s.v_star.residual < 1e-8);
    check_against_oracle(s.u_star, ref["dirichlet"]);
    check_against_oracle(s.v_star, ref["neumann"]);
    // Dirichlet species sits below the Neumann one near the boundary.
    CHECK(s.u_star.values[0] < s.v_star.values[0]);
    CHECK(s.u_star.values[255] < s.v_star.values[255]);
}

TEST_CASE("linearization at u* has principal point zero") {
    const auto& s = setup();
    const auto A = assemble_dispersal(s.grid, s.kernel, 1.0, CoefficientField(s.grid, s.p.f(s.u_star.values)));
    CHECK(std::abs(principal_point_eig(A).lambda_tilde) < 1e-6);
}

TEST_CASE("semi-trivial states are stationary") {
    const auto& s = setup();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(256);
    CompetitionOptions co;
    co.capture_stride = 50;
    const auto tr = simulate_competition(s.p, s.u_star.values, zero, 10.0, co);
    CHECK((tr.u_states.back() - s.u_star.values).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(tr.v_states.back().cwiseAbs().maxCoeff() == 0.0);
    const auto tv = simulate_competition(s.p, zero, s.v_star.values, 10.0, co, &s.v_star.values);
    CHECK(tv.diagnostics.back().v_residual < 1e-6);
}

TEST_CASE("v alone converges to v*") {
    const auto& s = setup();
    CompetitionOptions co;
    co.stop_below = 1e-6;
    const auto tr = run_exclusion(s.p, Eigen::VectorXd::Zero(256), Eigen::VectorXd::Constant(256, 0.2), s.v_star.values, co);
    CHECK(tr.u_states.back().cwiseAbs().maxCoeff() == 0.0);
    CHECK(tr.diagnostics.back().v_residual < 1e-5);
}

TEST_CASE("exclusion of the Dirichlet species, and the swapped claim fails") {
    const auto& s = setup();
    Rng rng(5);
    Eigen::VectorXd u0(256), v0(256);
    for (int j = 0; j < 256; ++j) {
        u0[j] = rng.uniform(0.2, 1.0);
        v0[j] = rng.uniform(0.2, 1.0);
    }
    CompetitionOptions co;
    co.stop_below = 1e-5;
    const auto tr = run_exclusion(s.p, u0, v0, s.v_star.values, co);
    const auto ex = verify_exclusion(tr, s.v_star.values, 1e-3);
    CHECK(ex.pass);
    CHECK(ex.final_u_sup < 1e-3);
    CHECK(ex.final_v_residual < 1e-3);
    CHECK(ex.u_monotone);
    CHECK(ex.v_monotone);
    const auto swapped = verify_exclusion_swapped(tr, s.u_star.values, 1e-3);
    CHECK_FALSE(swapped.pass);
    CHECK_FALSE(swapped.failing_metric.empty());
    for (const auto& d : tr.diagnostics) {
        CHECK(d.u_min >= -1e-10);
        CHECK(d.v_min >= -1e-10);
    }
}

TEST_CASE("competitive order is preserved") {
    // (u1, v1) <=_2 (u2, v2): u1 <= u2 and v1 >= v2.
    const Grid g = line(64, Boundary::Dirichlet);
    const auto p = CompetitionProblem::make(g, Kernel(Profile::TriangleTensor, 1, 0.3), 1.0,
                                            CoefficientField::sample(g, forms::sine(unit(), 0.5, 1.0, 1.0)),
                                            GrowthForm::LogisticQuadratic);
    Rng rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd u1(64), u2(64), v1(64), v2(64);
        for (int j = 0; j < 64; ++j) {
            u1[j] = rng.uniform(0.0, 0.5);
            u2[j] = u1[j] + rng.uniform(0.0, 0.5);
            v2[j] = rng.uniform(0.0, 0.5);
            v1[j] = v2[j] + rng.uniform(0.0, 0.5);
        }
        CompetitionOptions co;
        co.capture_stride = 5;
        const auto a = simulate_competition(p, u1, v1, 5.0, co);
        const auto b = simulate_competition(p, u2, v2, 5.0, co);
        REQUIRE(a.times.size() == b.times.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < a.times.size(); ++i) {
            worst = std::max(worst, (a.u_states[i] - b.u_states[i]).maxCoeff());
            worst = std::max(worst, (b.v_states[i] - a.v_states[i]).maxCoeff());
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("competition input validation") {
    const Grid gp = line(16, Boundary::Periodic);
    const auto r = CoefficientField::sample(gp, forms::constant(1.0));
    CHECK_THROWS(CompetitionProblem::make(gp, Kernel(Profile::Bump, 1, 0.2), 1.0, r));
    const Grid g = line(16, Boundary::Neumann);
    CHECK_THROWS(CompetitionProblem::make(g, Kernel(Profile::Bump, 1, 0.2, Point{0.3, 0.0}), 1.0,
                                          CoefficientField::sample(g, forms::constant(1.0))));
    CHECK(growth_form_from_string("logistic_quadratic") == GrowthForm::LogisticQuadratic);
    CHECK_THROWS(growth_form_from_string("gompertz"));
}
