#pragma once

#include "ionxxz/model_map.hpp"

namespace ionxxz {

enum class CriticalRegime { mean_field, interacting };

// Closed-form critical quantities for the long-range model:
// phi = min(2, sigma - d), beta_z = d/phi above the interacting threshold
// (phi > d) else 1, nu = 1/phi, z = phi, epsilon = phi - d.
struct ExponentSet {
    double sigma = 0.0;
    double d = 0.0;
    double phi = 0.0;
    double beta_z = 0.0;
    double nu = 0.0;
    double z = 0.0;
    double k_d = 0.0;
    double epsilon = 0.0;
    CriticalRegime regime = CriticalRegime::mean_field;
};

struct QuenchExponents {
    double p = 1.0;
    double zeta = 0.0;               // d / [phi (p+1)]
    double kz_length_exponent = 0.0; // nu / (z nu p + 1)
};

// Dilute-magnon equation of state at leading order.
struct EquationOfStatePoint {
    double mu = 0.0;
    double n = 0.0;
    double n0 = 0.0;
    double g2 = 0.0;
};

ExponentSet exponent_set(double sigma, double d);

// The one-loop phase-space constant as printed: 2^(d-1) pi^(d/2) Gamma(d/2).
double K_d(double d);

QuenchExponents quench_exponents(double sigma, double d, double p);

// Magnon kinetic energy E(k) = S [J(0) - J(k)] = 2 S J0 F(k, sigma) on the
// d = 1 lattice (accelerated Fourier sum). k in [0, pi].
double magnon_dispersion(double k, const ModelSpec& model);

// Small-k coefficient c_phi with E(k) ~ c_phi k^phi, fitted as a geometric
// mean of E(k)/k^phi over the decade k in [1e-3, 1e-2].
double dispersion_coefficient(const ModelSpec& model);

// Leading-order T-matrix g(2mu, 0) = eps K_d (2 mu)^(eps/phi); eps > 0 only.
double tmatrix_leading(double mu, const ExponentSet& es);

// n0 = mu / g(2mu, 0), n = n0 at leading order, equal to the closed form
// (2^(eps/phi) eps K_d)^(-1) mu^(d/phi). For eps <= 0 the mean-field branch
// n = mu / bare_g2 applies.
EquationOfStatePoint equation_of_state(double mu, const ExponentSet& es, double bare_g2 = 1.0);

// Dimensionless magnetization prefactor in m_Z = S (1 - D |dh/h_c|^beta_z).
// Exactly 1 for eps <= 0; for eps > 0 obtained by rescaling the magnon
// Hamiltonian to E_k = k^phi / 2 (which fixes h'_c = h_c / (4 S J0 c_F))
// and reading D off the leading-order equation of state:
// D = h'_c^(d/phi) / (S 2^(eps/phi) eps K_d). d = 1 only (lattice-backed).
double prefactor_D(double sigma, double d, double lambda, double spin = 0.5,
                   double coupling = 1.0);

// omega_k = sqrt(Ebar_k (Ebar_k + 2 mu)) with Ebar_k = k^phi / 2; the
// condensate side needs mu >= 0.
double bogoliubov_dispersion(double k, double mu, const ExponentSet& es);

}
