#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ionxxz {

enum class LengthScaleMode { physical, dimensionless };

// Static parameters of a linear trap. Frequencies are angular. The radial
// frequency is used only for the alignment validity check; positions and mode
// frequencies come out in units of the axial frequency and the Coulomb length
// l = (Z^2 e^2 / (4 pi eps0 M omega_z^2))^(1/3).
struct TrapSpec {
    int ion_count = 1;
    double axial_frequency = 1.0;   // omega_z [rad/s], or 1 in dimensionless mode
    double radial_frequency = 10.0; // omega_x = omega_y
    double ion_mass = 1.0;          // [kg] in physical mode
    int ion_charge = 1;             // multiples of e
    LengthScaleMode length_scale_mode = LengthScaleMode::dimensionless;
};

// Dimensionless equilibrium coordinates, sorted ascending. residual is the
// max force-balance violation; for equidistant chains it records the actual
// imbalance rather than a solver tolerance.
struct IonChain {
    std::vector<double> positions;
    double residual = 0.0;
    bool solved = false; // true when produced by solve_equilibrium
};

// Longitudinal normal modes. frequencies[l] is omega_l / omega_z, ascending;
// mode_matrix column l is the orthonormal eigenvector f_{i,l}.
struct PhononSpectrum {
    Eigen::VectorXd frequencies;
    Eigen::MatrixXd mode_matrix;
};

struct RwaEntry {
    int ion = 0;
    int mode = 0;
    double carrier_ratio = 0.0;  // eta_{i,l} * Omega / |Delta - omega_l|
    double dressing_ratio = 0.0; // Omega' / |Delta - omega_l|
    double field_ratio = 0.0;    // Omega_h / |Delta - omega_l|
    bool resonance = false;      // Delta == omega_l exactly
};

struct RwaReport {
    std::vector<RwaEntry> entries;
    double threshold = 0.1;
    bool pass = false;
    double worst_ratio = 0.0;
};

// Unique sorted solution of u_i = sum_{j<i}(u_i-u_j)^-2 - sum_{j>i}(u_j-u_i)^-2.
// Damped Newton from an evenly spaced guess; throws on nonconvergence.
IonChain solve_equilibrium(const TrapSpec& spec);

// Diagonalizes the dimensionless axial Hessian
//   A_ii = 1 + 2 sum_{j != i} |u_i - u_j|^-3,  A_ij = -2 |u_i - u_j|^-3.
// Accepts any strictly increasing positions (the Hessian is positive definite
// with lowest eigenvalue exactly 1 regardless of equilibrium), so both solved
// and idealized equidistant chains are valid inputs.
PhononSpectrum longitudinal_modes(const IonChain& chain);

// Idealized evenly spaced chain at the given spacing (Coulomb-length units).
// residual reports the true force imbalance of that configuration.
IonChain equidistant_chain(int n, double spacing);

// eta_{i,l} = delta_k * f_{i,l} / sqrt(2 M omega_l) in hbar = 1 convention
// (for SI inputs multiply by sqrt(hbar)). Requires a physical-mode spec.
Eigen::MatrixXd lamb_dicke_parameters(const TrapSpec& spec, const PhononSpectrum& spectrum,
                                      double delta_k);

// Ratios eta*Omega/|Delta-omega_l|, Omega'/|..|, Omega_h/|..| per (ion, mode),
// flagged against the threshold. Exact resonance is reported, not thrown.
// All rates in the same frequency unit as the mode frequencies.
RwaReport check_rwa(const TrapSpec& spec, const PhononSpectrum& spectrum,
                    const Eigen::MatrixXd& lamb_dicke, double rabi, double dressing_rabi,
                    double field_rabi, double detuning, double threshold = 0.1);

}
