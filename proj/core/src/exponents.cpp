#include "ionxxz/exponents.hpp"

#include <cmath>

#include "ionxxz/common.hpp"
#include "ionxxz/lattice_sum.hpp"

namespace ionxxz {

ExponentSet exponent_set(double sigma, double d) {
    if (d <= 0) throw error("exponents", "dimension must be positive");
    if (sigma <= d) throw error("exponents", "thermodynamics needs sigma > d");
    ExponentSet es;
    es.sigma = sigma;
    es.d = d;
    es.phi = std::min(2.0, sigma - d);
    es.beta_z = es.phi > d ? d / es.phi : 1.0;
    es.nu = 1.0 / es.phi;
    es.z = es.phi;
    es.k_d = K_d(d);
    es.epsilon = es.phi - d;
    es.regime = es.epsilon > 0 ? CriticalRegime::interacting : CriticalRegime::mean_field;
    return es;
}

double K_d(double d) {
    constexpr double pi = 3.14159265358979323846;
    if (d <= 0) throw error("exponents", "dimension must be positive");
    return std::pow(2.0, d - 1.0) * std::pow(pi, 0.5 * d) * std::tgamma(0.5 * d);
}

QuenchExponents quench_exponents(double sigma, double d, double p) {
    if (p <= 0) throw error("exponents", "ramp power must be positive");
    const ExponentSet es = exponent_set(sigma, d);
    QuenchExponents q;
    q.p = p;
    q.zeta = d / (es.phi * (p + 1.0));
    q.kz_length_exponent = es.nu / (es.z * es.nu * p + 1.0);
    return q;
}

namespace {

void require_1d_lattice(const ModelSpec& model, const char* what) {
    if (model.dimension != 1.0)
        throw error("exponents", std::string(what) + " is lattice-backed and supports d = 1 only");
    if (model.sigma <= model.dimension)
        throw error("exponents", std::string(what) + " needs sigma > d");
}

} // namespace

double magnon_dispersion(double k, const ModelSpec& model) {
    require_1d_lattice(model, "magnon_dispersion");
    if (k == 0.0) return 0.0;
    return 2.0 * model.spin * model.coupling * dispersion_sum(std::abs(k), model.sigma);
}

double dispersion_coefficient(const ModelSpec& model) {
    require_1d_lattice(model, "dispersion_coefficient");
    const double phi = std::min(2.0, model.sigma - model.dimension);
    constexpr int n_pts = 16;
    double log_acc = 0.0;
    for (int i = 0; i < n_pts; ++i) {
        const double k = std::pow(10.0, -3.0 + double(i) / (n_pts - 1));
        log_acc += std::log(magnon_dispersion(k, model)) - phi * std::log(k);
    }
    return std::exp(log_acc / n_pts);
}

double tmatrix_leading(double mu, const ExponentSet& es) {
    if (es.epsilon <= 0)
        throw error("exponents", "T-matrix expansion needs eps > 0 (mean-field branch applies)");
    if (mu <= 0) throw error("exponents", "T-matrix needs mu > 0");
    return es.epsilon * es.k_d * std::pow(2.0 * mu, es.epsilon / es.phi);
}

EquationOfStatePoint equation_of_state(double mu, const ExponentSet& es, double bare_g2) {
    if (mu < 0) throw error("exponents", "equation of state needs mu >= 0");
    EquationOfStatePoint pt;
    pt.mu = mu;
    if (es.epsilon <= 0) {
        // Mean-field regime: fixed bare two-body coupling.
        pt.g2 = bare_g2;
        pt.n0 = mu / bare_g2;
        pt.n = pt.n0;
        return pt;
    }
    if (mu == 0.0) return pt; // critical point, n = 0
    pt.g2 = tmatrix_leading(mu, es);
    pt.n0 = mu / pt.g2;
    pt.n = std::pow(2.0, -es.epsilon / es.phi) / (es.epsilon * es.k_d) *
           std::pow(mu, es.d / es.phi);
    return pt;
}

double prefactor_D(double sigma, double d, double lambda, double spin, double coupling) {
    if (sigma <= d) throw error("exponents", "prefactor needs sigma > d");
    const ExponentSet es = exponent_set(sigma, d);
    if (es.epsilon <= 0) return 1.0;
    if (d != 1.0) throw error("exponents", "prefactor_D is lattice-backed and supports d = 1 only");

    ModelSpec model;
    model.dimension = d;
    model.sigma = sigma;
    model.spin = spin;
    model.coupling = coupling;
    const double c_phi = dispersion_coefficient(model); // ~ 2 S J0 c_F

    // Rescaling E_k -> k^phi/2 divides all energies by 2 c_phi; the critical
    // field h_c = 2 S (1-lambda) J0 zeta(sigma) becomes h'_c, and
    // m_Z = S (1 - D |dh/h_c|^(d/phi)) with n = S - m_Z forces:
    const double h_c = 2.0 * spin * (1.0 - lambda) * coupling * riemann_zeta(sigma);
    const double h_c_rescaled = h_c / (2.0 * c_phi);
    return std::pow(h_c_rescaled, es.d / es.phi) /
           (spin * std::pow(2.0, es.epsilon / es.phi) * es.epsilon * es.k_d);
}

double bogoliubov_dispersion(double k, double mu, const ExponentSet& es) {
    if (mu < 0) throw error("exponents", "Bogoliubov dispersion needs mu >= 0 (ordered side)");
    if (k < 0) throw error("exponents", "k must be non-negative");
    const double ek = 0.5 * std::pow(k, es.phi);
    return std::sqrt(ek * (ek + 2.0 * mu));
}

}
