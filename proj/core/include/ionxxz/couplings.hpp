#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ionxxz/trap.hpp"

namespace ionxxz {

// Beat-note drive. All rates share the unit of the mode frequencies (omega_z
// units by default). The longitudinal scheme needs 0 < Delta < omega_z.
struct BeamParams {
    double rabi = 1.0;      // Omega
    double detuning = 0.5;  // Delta
    double delta_k = 1.0;   // beat-note wavevector
};

// Pairwise effective couplings plus the pair distances used by the fit.
// distances are measured in units of R0, the nearest-neighbor spacing at the
// chain center.
struct CouplingMatrix {
    int size = 0;
    Eigen::MatrixXd values;    // J_ij^eff, zero diagonal, symmetric
    Eigen::MatrixXd distances; // r_ij / R0
    double r0 = 0.0;           // R0 in Coulomb-length units
};

struct PowerLawFit {
    double amplitude = 0.0;            // J0
    double exponent = 0.0;             // sigma, J ~ r^-sigma
    double max_relative_residual = 0.0;
    double window_min = 0.0;           // distance range actually used
    double window_max = 0.0;
};

enum class ChainMode { real, equidistant };

struct DetuningPoint {
    double delta = 0.0;
    double delta_tilde = 0.0; // (omega_z^2 - Delta^2) / omega_c^2
    double sigma = 0.0;
    double fit_residual = 0.0;
    double beta_z = 0.0;      // NaN where sigma <= d
    double d_prefactor = 0.0; // NaN where sigma <= d
    ChainMode chain_mode = ChainMode::real;
    bool ok = true;
    std::string message;
};

struct SweepOptions {
    int points = 200;
    double frac_min = 1e-3;   // delta_tilde grid as fractions of R0^3
    double frac_max = 0.9999;
    double spacing = 2.5;     // equidistant spacing, Coulomb-length units
    double lambda = 0.5;      // anisotropy entering the D prefactor
    double dimension = 1.0;
    int interior_margin = 1;  // ions dropped per edge in the real-chain fit
};

// J_ij^eff = Omega^2 dk^2 / (2 M) sum_l f_il f_jl / (Delta^2 - omega_l^2),
// exact over all N modes; frequencies in omega_z units, mass defaults to 1.
// Fails if Delta is within the exclusion width of any mode.
CouplingMatrix effective_couplings(const IonChain& chain, const PhononSpectrum& spectrum,
                                   const BeamParams& beam, double mass = 1.0,
                                   double resonance_width = 1e-6);

// Least squares of log|J| on log r, pairs binned by distance (1e-6 rounding)
// using the mean |J| per bin. window: [r_min, r_max] in R0 units; pass
// (0, inf) for all pairs. Fails on a sign change inside the window.
PowerLawFit fit_power_law(const CouplingMatrix& matrix, double window_min = 0.0,
                          double window_max = 1e300);

// Full detuning sweep for one chain variant: per grid point computes
// delta_tilde, the sigma fit, and the derived beta_z and D. Per-point
// failures are recorded in the point, the sweep continues.
// deltas: explicit Delta grid in omega_z units; empty -> default log grid of
// options.points values spanning [frac_min, frac_max] * R0^3 in delta_tilde.
std::vector<DetuningPoint> detuning_sweep(const TrapSpec& spec, ChainMode mode,
                                          std::vector<double> deltas = {},
                                          const SweepOptions& options = {});

}
