#include "ionxxz/rg_flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ionxxz/common.hpp"

namespace ionxxz {

void beta_functions(const RGState& state, double eps, double phi, double k_d, double& dg_db,
                    double& dmu_db) {
    if (k_d <= 0.0) throw error("rg", "geometric factor must be positive");
    dg_db = -eps * state.g_tilde + state.g_tilde * state.g_tilde / k_d;
    dmu_db = -phi * state.mu_tilde;
}

RGState closed_form_flow(double g0, double mu0, double b, double eps, double phi, double k_d) {
    if (k_d <= 0.0) throw error("rg", "geometric factor must be positive");
    RGState out;
    out.b = b;
    out.mu_tilde = mu0 * std::exp(-phi * b);
    if (g0 == 0.0) {
        out.g_tilde = 0.0;
        return out;
    }
    // Bernoulli equation: 1/g flows linearly in e^(eps b).
    double denom;
    if (eps == 0.0) {
        denom = 1.0 / g0 - b / k_d;
    } else {
        const double gs = eps * k_d;
        denom = (1.0 / g0 - 1.0 / gs) * std::exp(eps * b) + 1.0 / gs;
    }
    if (denom <= 0.0) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "coupling runs away before b = %.17g", b);
        throw error("rg", buf);
    }
    out.g_tilde = 1.0 / denom;
    return out;
}

namespace {

struct Deriv {
    double g, mu;
};

Deriv rhs(double g, double mu, double eps, double phi, double k_d) {
    return {-eps * g + g * g / k_d, -phi * mu};
}

} // namespace

RGTrajectory integrate_flow(const RGState& initial, double eps, double phi, double k_d,
                            double b_min, const StepControl& control) {
    if (k_d <= 0.0) throw error("rg", "geometric factor must be positive");
    if (b_min >= initial.b) throw error("rg", "b_min must lie below the starting scale");
    if (control.rel_tol <= 0.0 || control.abs_tol <= 0.0 || control.initial_step <= 0.0 ||
        control.max_step <= 0.0)
        throw error("rg", "step control values must be positive");

    RGTrajectory traj;
    traj.states.push_back(initial);

    // Cash-Karp embedded pair (orders 4 and 5); the system is autonomous so
    // the abscissae never enter.
    static const double b21 = 0.2;
    static const double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    static const double b41 = 0.3, b42 = -0.9, b43 = 1.2;
    static const double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
    static const double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                        b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
    static const double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                        c6 = 512.0 / 1771.0;
    static const double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0, d4 = 13525.0 / 55296.0,
                        d5 = 277.0 / 14336.0, d6 = 0.25;

    double b = initial.b;
    double g = initial.g_tilde;
    double mu = initial.mu_tilde;
    double h = -std::abs(control.initial_step);

    const double blow_up = 1e6;
    const double stall = 1e-14;
    const int max_steps = 2000000;

    for (int step = 0; step < max_steps && b > b_min; ++step) {
        Deriv k1 = rhs(g, mu, eps, phi, k_d);
        if (std::abs(k1.g) < stall && std::abs(k1.mu) < stall) {
            traj.termination = FlowTermination::converged;
            return traj;
        }
        if (b + h < b_min) h = b_min - b;

        bool accepted = false;
        for (int attempt = 0; attempt < 64 && !accepted; ++attempt) {
            Deriv k2 = rhs(g + h * b21 * k1.g, mu + h * b21 * k1.mu, eps, phi, k_d);
            Deriv k3 = rhs(g + h * (b31 * k1.g + b32 * k2.g), mu + h * (b31 * k1.mu + b32 * k2.mu),
                           eps, phi, k_d);
            Deriv k4 = rhs(g + h * (b41 * k1.g + b42 * k2.g + b43 * k3.g),
                           mu + h * (b41 * k1.mu + b42 * k2.mu + b43 * k3.mu), eps, phi, k_d);
            Deriv k5 = rhs(g + h * (b51 * k1.g + b52 * k2.g + b53 * k3.g + b54 * k4.g),
                           mu + h * (b51 * k1.mu + b52 * k2.mu + b53 * k3.mu + b54 * k4.mu), eps,
                           phi, k_d);
            Deriv k6 =
                rhs(g + h * (b61 * k1.g + b62 * k2.g + b63 * k3.g + b64 * k4.g + b65 * k5.g),
                    mu + h * (b61 * k1.mu + b62 * k2.mu + b63 * k3.mu + b64 * k4.mu + b65 * k5.mu),
                    eps, phi, k_d);

            const double g5 = g + h * (c1 * k1.g + c3 * k3.g + c4 * k4.g + c6 * k6.g);
            const double mu5 = mu + h * (c1 * k1.mu + c3 * k3.mu + c4 * k4.mu + c6 * k6.mu);
            const double g4 =
                g + h * (d1 * k1.g + d3 * k3.g + d4 * k4.g + d5 * k5.g + d6 * k6.g);
            const double mu4 =
                mu + h * (d1 * k1.mu + d3 * k3.mu + d4 * k4.mu + d5 * k5.mu + d6 * k6.mu);

            const double sc_g = control.abs_tol + control.rel_tol * std::max(std::abs(g), std::abs(g5));
            const double sc_mu =
                control.abs_tol + control.rel_tol * std::max(std::abs(mu), std::abs(mu5));
            const double err = std::max(std::abs(g5 - g4) / sc_g, std::abs(mu5 - mu4) / sc_mu);

            if (err <= 1.0 || std::abs(h) <= 1e-15 * std::max(1.0, std::abs(b))) {
                b += h;
                g = g5;
                mu = mu5;
                accepted = true;
            }
            double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            factor = std::clamp(factor, 0.2, 5.0);
            h *= factor;
            if (-h > control.max_step) h = -control.max_step;
        }
        if (!accepted) throw error("rg", "step size underflow in flow integration");

        traj.states.push_back({g, mu, b});
        if (!std::isfinite(g) || !std::isfinite(mu) || std::abs(g) > blow_up ||
            std::abs(mu) > blow_up) {
            traj.termination = FlowTermination::diverged;
            traj.divergence_scale = b;
            return traj;
        }
    }
    traj.termination = FlowTermination::reached_b_min;
    return traj;
}

std::vector<FixedPoint> find_fixed_points(double eps, double k_d) {
    if (k_d <= 0.0) throw error("rg", "geometric factor must be positive");
    std::vector<FixedPoint> out;

    FixedPoint gaussian;
    gaussian.g_star = 0.0;
    gaussian.eigenvalue_g = -eps;
    // Toward the infrared (b decreasing) a mode shrinks iff its d/db
    // eigenvalue is positive.
    gaussian.stability = eps > 0.0 ? Stability::infrared_unstable : Stability::infrared_stable;
    out.push_back(gaussian);

    if (eps > 0.0) {
        FixedPoint wf;
        wf.g_star = eps * k_d;
        wf.eigenvalue_g = eps;
        wf.stability = Stability::infrared_stable;
        out.push_back(wf);
    }
    return out;
}

FlowField flow_field_grid(double eps, double phi, double k_d, double g_max, double mu_max,
                          int resolution, double b_min, const std::vector<RGState>& seeds) {
    if (resolution < 2) throw error("rg", "grid resolution must be at least 2");
    if (g_max <= 0.0 || mu_max <= 0.0) throw error("rg", "grid extents must be positive");

    FlowField field;
    field.arrows.reserve(static_cast<size_t>(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            FlowArrow ar;
            ar.g = g_max * i / (resolution - 1);
            ar.mu = mu_max * j / (resolution - 1);
            double dg, dmu;
            beta_functions({ar.g, ar.mu, 0.0}, eps, phi, k_d, dg, dmu);
            ar.dg_ir = -dg; // pointing toward the infrared
            ar.dmu_ir = -dmu;
            field.arrows.push_back(ar);
        }
    }

    std::vector<RGState> starts = seeds;
    if (starts.empty()) {
        // Default bundle of 12. mu is relevant toward the infrared, so every
        // trajectory rises; seeding at small mu lets each one sweep the
        // window while g relaxes toward its fixed point.
        for (int i = 0; i < 6; ++i)
            starts.push_back({g_max * (i + 0.5) / 6.0, mu_max * 1e-3, 0.0});
        for (int i = 0; i < 3; ++i)
            starts.push_back({g_max * 0.02, mu_max * std::pow(10.0, -1.0 - i), 0.0});
        for (int i = 0; i < 3; ++i)
            starts.push_back({g_max * 0.98, mu_max * std::pow(10.0, -1.0 - i), 0.0});
    }
    field.trajectories.reserve(starts.size());
    for (const RGState& s : starts)
        field.trajectories.push_back(integrate_flow(s, eps, phi, k_d, b_min));
    return field;
}

}
