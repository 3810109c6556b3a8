#include "ionxxz/model_map.hpp"

#include <cmath>

#include "ionxxz/common.hpp"
#include "ionxxz/lattice_sum.hpp"

namespace ionxxz {

ModelSpec experiment_to_model(const ExperimentParams& exp,
                              const Eigen::MatrixXd& effective_couplings,
                              double validity_ratio) {
    constexpr double half_pi = 1.57079632679489661923;
    if (exp.theta < 0 || exp.theta >= half_pi)
        throw error("model-map", "theta must lie in [0, pi/2)");
    if (exp.dressing_rabi <= 0)
        throw error("model-map", "dressing rate must be positive for the XXZ mapping");

    const double c2 = std::cos(exp.theta) * std::cos(exp.theta);
    const double t = std::tan(exp.theta);

    ModelSpec model;
    model.dimension = 1.0;
    model.lambda = 2.0 * t * t;
    model.field = 2.0 * exp.field_rabi;
    model.spin = 0.5;
    model.sites = static_cast<int>(effective_couplings.rows());
    model.explicit_couplings = (2.0 * c2) * effective_couplings.cwiseAbs();
    model.coupling = 2.0 * std::abs(exp.coupling_scale) * c2;

    if (std::abs(exp.coupling_scale) > validity_ratio * exp.dressing_rabi)
        model.mapping_warning = "coupling scale exceeds " + std::to_string(validity_ratio) +
                                " of the dressing rate; XXZ mapping marginal";
    return model;
}

ExperimentParams model_to_experiment(const ModelSpec& model) {
    if (model.lambda < 0) throw error("model-map", "lambda must be non-negative");
    ExperimentParams exp;
    exp.theta = std::atan(std::sqrt(model.lambda / 2.0));
    exp.field_rabi = model.field / 2.0;
    const double c2 = std::cos(exp.theta) * std::cos(exp.theta);
    exp.coupling_scale = model.coupling / (2.0 * c2);
    return exp;
}

CriticalField critical_field(const ModelSpec& model) {
    if (model.lambda < 0 || model.lambda > 1)
        throw error("model-map", "critical field needs lambda in [0, 1]");

    CriticalField out;
    const double pref = model.spin * (1.0 - model.lambda);
    if (model.explicit_couplings) {
        const Eigen::MatrixXd& j = *model.explicit_couplings;
        const int n = static_cast<int>(j.rows());
        if (n < 2) throw error("model-map", "explicit couplings need at least 2 sites");
        Eigen::VectorXd site = pref * (j.rowwise().sum() - j.diagonal());
        out.finite_chain = true;
        out.site_min = site.minCoeff();
        out.site_max = site.maxCoeff();
        out.site_center = site[n / 2];
        out.value = out.site_max;
        return out;
    }
    if (model.sigma <= model.dimension)
        throw error("model-map", "coupling sum diverges for sigma <= d");
    if (model.dimension != 1.0)
        throw error("model-map", "power-law critical field implemented for d = 1");
    out.value = 2.0 * pref * model.coupling * riemann_zeta(model.sigma);
    return out;
}

std::vector<PhaseBoundaryPoint> phase_boundary(const std::vector<double>& thetas,
                                               double coupling_sum, double spin) {
    const double omega_h0 = 0.5 * spin * coupling_sum;
    const double theta_max = std::atan(1.0 / std::sqrt(2.0));
    std::vector<PhaseBoundaryPoint> out;
    out.reserve(2 * thetas.size());
    for (double th : thetas) {
        if (th < 0 || th > theta_max + 1e-12)
            throw error("model-map", "phase boundary theta outside [0, atan(1/sqrt(2))]");
        const double c = std::cos(th), s = std::sin(th);
        PhaseBoundaryPoint p;
        p.theta = th;
        p.lambda = 2.0 * s * s / (c * c);
        p.omega_h_crit = omega_h0 * (c * c - 2.0 * s * s);
        out.push_back(p);
    }
    // Mirrored branch: the diagram is symmetric under Omega_h -> -Omega_h.
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        PhaseBoundaryPoint p = out[i];
        p.omega_h_crit = -p.omega_h_crit;
        out.push_back(p);
    }
    return out;
}

}
