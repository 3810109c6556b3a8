#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace ionxxz {

// Laboratory knobs of the dressed-beam scheme. theta sets the anisotropy,
// the resonant-field Rabi rate sets h, the dressing rate gates the mapping's
// validity (coupling scale must stay well below it).
struct ExperimentParams {
    double theta = 0.0;         // [rad], in [0, pi/2)
    double field_rabi = 0.0;    // Omega_h
    double dressing_rabi = 1.0; // Omega'
    double coupling_scale = 0.0; // J0^eff
};

// XXZ model parameters. dimension is real-valued for formula evaluation;
// simulation paths require d = 1. explicit_couplings overrides the power law.
struct ModelSpec {
    double dimension = 1.0;
    double sigma = 2.3;
    double lambda = 0.0;
    double field = 0.0;
    double spin = 0.5;
    double coupling = 1.0; // J0
    int sites = 0;         // N, finite systems only
    std::optional<Eigen::MatrixXd> explicit_couplings;
    std::string mapping_warning; // set when the RWA validity ratio is exceeded
};

struct CriticalField {
    double value = 0.0;       // thermodynamic h_c, or max site value when finite
    bool finite_chain = false;
    double site_min = 0.0;    // per-site h_c spread, finite chains only
    double site_max = 0.0;
    double site_center = 0.0;
};

struct PhaseBoundaryPoint {
    double theta = 0.0;
    double lambda = 0.0;
    double omega_h_crit = 0.0;
};

// lambda = 2 tan^2(theta), h = 2 Omega_h, J_ij = 2 |J_ij^eff| cos^2(theta).
// Attaches a warning (not a failure) when |J0^eff| / Omega' exceeds the
// validity ratio.
ModelSpec experiment_to_model(const ExperimentParams& exp,
                              const Eigen::MatrixXd& effective_couplings,
                              double validity_ratio = 0.1);

// Inverse of the knob map on its valid domain; ignores couplings.
ExperimentParams model_to_experiment(const ModelSpec& model);

// Infinite power-law chain: h_c = 2 S (1 - lambda) J0 zeta(sigma).
// With explicit couplings: per-site h_c,i = S (1 - lambda) sum_j J_ij,
// reported as max (the saturation field) plus the site spread.
CriticalField critical_field(const ModelSpec& model);

// Mean-field lobe Omega_h^c(theta) = Omega_h^(0) (cos^2 theta - 2 sin^2 theta)
// where Omega_h^(0) = S * coupling_sum / 2 is the critical field at lambda=0.
// Returns the + branch followed by the mirrored - branch.
std::vector<PhaseBoundaryPoint> phase_boundary(const std::vector<double>& thetas,
                                               double coupling_sum, double spin = 0.5);

}
