#pragma once

#include <string>
#include <vector>

namespace ionxxz {

// Point on a flow: dimensionless coupling and chemical potential at log
// scale b (b <= 0 toward the infrared).
struct RGState {
    double g_tilde = 0.0;
    double mu_tilde = 0.0;
    double b = 0.0;
};

enum class FlowTermination { reached_b_min, diverged, converged };

struct RGTrajectory {
    std::vector<RGState> states; // b strictly decreasing
    FlowTermination termination = FlowTermination::reached_b_min;
    double divergence_scale = 0.0; // b* when terminated diverged
};

enum class Stability { infrared_stable, infrared_unstable };

struct FixedPoint {
    double g_star = 0.0;
    Stability stability = Stability::infrared_stable;
    double eigenvalue_g = 0.0;  // linearization along g at mu = 0, d/db
    double eigenvalue_mu = 0.0; // always -phi (relevant toward the infrared)
};

struct FlowArrow {
    double g = 0.0, mu = 0.0;
    double dg_ir = 0.0, dmu_ir = 0.0; // derivatives toward the infrared (-d/db)
};

struct FlowField {
    std::vector<FlowArrow> arrows;
    std::vector<RGTrajectory> trajectories;
};

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    double initial_step = 1e-3;
    double max_step = 0.25;
};

// One-loop flow: dg/db = -eps g + g^2 / K_d, dmu/db = -phi mu.
void beta_functions(const RGState& state, double eps, double phi, double k_d, double& dg_db,
                    double& dmu_db);

// Analytic Bernoulli solution, the integrator's oracle:
// g(b) = [(1/g0 - 1/(eps K)) e^(eps b) + 1/(eps K)]^-1, mu(b) = mu0 e^(-phi b).
// Throws with the runaway scale when the denominator crosses zero.
RGState closed_form_flow(double g0, double mu0, double b, double eps, double phi, double k_d);

// Adaptive embedded Runge-Kutta toward the infrared (b decreasing from
// initial.b to b_min). Stops early on convergence (both derivatives below
// 1e-14) or divergence (|state| > 1e6, scale recorded).
RGTrajectory integrate_flow(const RGState& initial, double eps, double phi, double k_d,
                            double b_min, const StepControl& control = {});

// g* = 0 always; g* = eps K_d when eps > 0. Stability read off the
// linearized flow toward the infrared.
std::vector<FixedPoint> find_fixed_points(double eps, double k_d);

// Arrow grid plus a documented default bundle of 12 boundary-seeded
// trajectories per panel (or custom seeds).
FlowField flow_field_grid(double eps, double phi, double k_d, double g_max, double mu_max,
                          int resolution, double b_min = -8.0,
                          const std::vector<RGState>& seeds = {});

}
