#include <doctest.h>

#include <cmath>
#include <random>

#include "ionxxz/common.hpp"
#include "ionxxz/rg_flow.hpp"

using namespace ionxxz;

TEST_SUITE("rg_flow") {

TEST_CASE("beta functions evaluate the one-loop forms") {
    double dg = 0.0, dmu = 0.0;
    RGState s;
    s.g_tilde = 0.5;
    s.mu_tilde = 0.2;
    beta_functions(s, 0.3, 1.3, 3.141592653589793238463, dg, dmu);
    CHECK(dg == doctest::Approx(-0.07042252845405233211556).epsilon(1e-14));
    CHECK(dmu == doctest::Approx(-1.3 * 0.2).epsilon(1e-14));
}

TEST_CASE("closed form matches the frozen reference point") {
    const double k = 3.141592653589793238463;
    const RGState s = closed_form_flow(0.5, 0.01, -1.0, 0.3, 1.3, k);
    CHECK(s.g_tilde == doctest::Approx(0.5692696244184960325463).epsilon(1e-13));
    CHECK(s.mu_tilde == doctest::Approx(0.03669296667619244220457).epsilon(1e-13));
    CHECK(s.b == -1.0);
}

TEST_CASE("marginal case follows the logarithmic solution") {
    const double k = 3.141592653589793238463;
    const RGState s = closed_form_flow(0.5, 0.0, -2.0, 0.0, 1.0, k);
    CHECK(s.g_tilde == doctest::Approx(1.0 / (2.0 + 2.0 / k)).epsilon(1e-13));
}

TEST_CASE("closed form reports a runaway toward the ultraviolet") {
    const double k = 3.141592653589793238463;
    // starting above the interacting fixed point the denominator crosses
    // zero at b = ln(2)/eps when g0 = 2 eps K
    CHECK_THROWS_AS(closed_form_flow(0.6 * k, 0.0, 10.0, 0.3, 1.3, k), error);
    CHECK_NOTHROW(closed_form_flow(0.6 * k, 0.0, 2.0, 0.3, 1.3, k));
}

TEST_CASE("integrator agrees with the closed form on random instances") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> ueps(-0.5, 0.5), uphi(0.5, 2.0), ub(-10.0, 0.0),
        ug(0.01, 1.0), umu(0.0, 0.5);
    const double k = 3.141592653589793238463;
    for (int i = 0; i < 100; ++i) {
        const double eps = ueps(rng), phi = uphi(rng), b_min = ub(rng);
        double g0 = ug(rng);
        if (eps > 0.0) g0 = std::min(g0, 0.9 * eps * k); // stay below the runaway separatrix
        const double mu0 = umu(rng);

        RGState start;
        start.g_tilde = g0;
        start.mu_tilde = mu0;
        const RGTrajectory traj = integrate_flow(start, eps, phi, k, b_min);
        REQUIRE(traj.states.size() >= 1);
        const RGState& last = traj.states.back();
        const RGState want = closed_form_flow(g0, mu0, last.b, eps, phi, k);
        CHECK(last.g_tilde == doctest::Approx(want.g_tilde).epsilon(1e-8).scale(1.0));
        CHECK(last.mu_tilde == doctest::Approx(want.mu_tilde).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("scale parameter decreases monotonically along a trajectory") {
    RGState start;
    start.g_tilde = 0.4;
    start.mu_tilde = 1e-4;
    const RGTrajectory traj = integrate_flow(start, 0.3, 1.3, 3.141592653589793238463, -6.0);
    for (std::size_t i = 1; i < traj.states.size(); ++i)
        CHECK(traj.states[i].b < traj.states[i - 1].b);
}

TEST_CASE("positive eps drives the coupling to the interacting fixed point") {
    RGState start;
    start.g_tilde = 0.05;
    start.mu_tilde = 0.0;
    const RGTrajectory traj = integrate_flow(start, 0.3, 1.3, 3.141592653589793238463, -80.0);
    CHECK(traj.states.back().g_tilde ==
          doctest::Approx(0.9424777960769379715388).epsilon(1e-9));
}

TEST_CASE("negative eps drives the coupling to zero") {
    RGState start;
    start.g_tilde = 0.5;
    start.mu_tilde = 0.0;
    const RGTrajectory traj = integrate_flow(start, -0.3, 0.7, 3.141592653589793238463, -60.0);
    CHECK(std::abs(traj.states.back().g_tilde) < 1e-7);
}

TEST_CASE("relevant chemical potential triggers the divergence stop") {
    RGState start;
    start.g_tilde = 0.1;
    start.mu_tilde = 1.0;
    const RGTrajectory traj = integrate_flow(start, 0.3, 1.3, 3.141592653589793238463, -80.0);
    CHECK(traj.termination == FlowTermination::diverged);
    CHECK(traj.divergence_scale > -80.0);
    CHECK(std::abs(traj.states.back().mu_tilde) > 1e6);
}

TEST_CASE("flow started on the fixed point reports convergence") {
    const double k = 3.141592653589793238463;
    RGState start;
    start.g_tilde = 0.3 * k;
    start.mu_tilde = 0.0;
    const RGTrajectory traj = integrate_flow(start, 0.3, 1.3, k, -50.0);
    CHECK(traj.termination == FlowTermination::converged);
    CHECK(traj.states.back().g_tilde == doctest::Approx(0.3 * k).epsilon(1e-12));
}

TEST_CASE("fixed point catalog switches with the sign of eps") {
    const double k = 3.141592653589793238463;
    const std::vector<FixedPoint> above = find_fixed_points(0.3, k);
    REQUIRE(above.size() == 2);
    CHECK(above[0].g_star == 0.0);
    CHECK(above[0].stability == Stability::infrared_unstable);
    CHECK(above[0].eigenvalue_g == doctest::Approx(-0.3).epsilon(1e-14));
    CHECK(above[1].g_star == doctest::Approx(0.9424777960769379715388).epsilon(1e-13));
    CHECK(above[1].stability == Stability::infrared_stable);
    CHECK(above[1].eigenvalue_g == doctest::Approx(0.3).epsilon(1e-14));

    const std::vector<FixedPoint> below = find_fixed_points(-0.2, k);
    REQUIRE(below.size() == 1);
    CHECK(below[0].g_star == 0.0);
    CHECK(below[0].stability == Stability::infrared_stable);
}

TEST_CASE("flow field grid carries arrows and window-spanning trajectories") {
    const FlowField field = flow_field_grid(0.3, 1.3, 3.141592653589793238463, 1.5, 1.0, 8);
    CHECK(field.arrows.size() == 64);
    for (const FlowArrow& a : field.arrows) {
        CHECK(std::isfinite(a.dg_ir));
        CHECK(std::isfinite(a.dmu_ir));
    }
    CHECK(field.trajectories.size() >= 6);
    for (const RGTrajectory& t : field.trajectories) CHECK(t.states.size() >= 2);
}

TEST_CASE("step control rejects nonsense") {
    RGState start;
    start.g_tilde = 0.1;
    StepControl ctl;
    ctl.rel_tol = -1.0;
    CHECK_THROWS_AS(integrate_flow(start, 0.3, 1.3, 3.14, -1.0, ctl), error);
    CHECK_THROWS_AS(integrate_flow(start, 0.3, 1.3, -1.0, -1.0), error);
    CHECK_THROWS_AS(integrate_flow(start, 0.3, 1.3, 3.14, 1.0), error); // b_min must sit below 0
}

}
