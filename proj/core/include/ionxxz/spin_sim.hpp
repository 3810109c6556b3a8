#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <vector>

#include "ionxxz/model_map.hpp"

namespace ionxxz {

// Site-resolved coupling matrix for the spin chain: the explicit matrix when
// the model carries one, otherwise coupling / |i-j|^sigma.
Eigen::MatrixXd spin_couplings(const ModelSpec& model);

struct SectorInfo {
    int up_count = 0;
    double magnetization = 0.0; // total S^z of the sector
    std::size_t dimension = 0;
    double ground_energy = 0.0; // field-independent part; full energy is this - h * m
    bool iterative = false;     // solved with Lanczos rather than a dense solver
};

struct MagnetizationStep {
    double field = 0.0;
    double m_z = 0.0; // total S^z of the ground sector
    int ground_sector = 0;
    double energy = 0.0;
};

struct SectorCrossing {
    double field = 0.0; // exact level-crossing field between the two sectors
    int sector_low = 0; // up_count on the low-magnetization side
    int sector_high = 0;
};

struct GroundStateScan {
    std::vector<SectorInfo> sectors;
    std::vector<MagnetizationStep> rows;
    std::vector<SectorCrossing> crossings;
};

struct ScanOptions {
    int dense_limit = 4096; // largest sector dimension handled densely
    int max_sites = 16;
};

// Ground state versus longitudinal field, magnetization sector by sector.
// The field enters only through the exact shift -h * m, so each sector is
// diagonalized once for the whole field list.
GroundStateScan ground_state_scan(const ModelSpec& model, const std::vector<double>& fields,
                                  const ScanOptions& options = {});

struct CriticalFieldEstimate {
    double one_magnon = 0.0;    // single-flip instability field of the finite chain
    double thermodynamic = 0.0; // infinite-chain mean-field value
};

CriticalFieldEstimate finite_size_critical_field(const ModelSpec& model);

// Field ramp h(t) = h_start - rate * t^power, integrated until h reaches
// h_final. A transverse seed (units of the coupling scale) is switched on
// linearly in h between the anchor and the critical field so the initial
// state stays an exact eigenstate while the ordered side still picks a
// transverse direction.
struct QuenchProtocol {
    double h_start = 1.0;
    double h_final = 0.0;
    double rate = 0.01;
    double power = 1.0;
    double seed_field = 0.05;
    double seed_anchor = std::numeric_limits<double>::quiet_NaN();   // default: h_start
    double critical_field = std::numeric_limits<double>::quiet_NaN(); // default: one-magnon value
    double tolerance = 1e-8; // local state error per unit time
    double max_step = 0.1;
    int krylov_limit = 30;
    bool final_fidelity = true;
};

struct QuenchResult {
    Eigen::VectorXcd state;
    double duration = 0.0;
    double defect_density = 0.0;
    double fidelity_vs_initial = 0.0;
    double fidelity_vs_final_ground = std::numeric_limits<double>::quiet_NaN();
    double norm_drift = 0.0; // worst |1 - |psi|| observed before renormalizing
    double critical_field = 0.0;
    long accepted_steps = 0;
    long rejected_steps = 0;
};

// Krylov propagator with the Hamiltonian frozen at each substep midpoint and
// step doubling for local error control. Starts from the fully polarized
// state.
QuenchResult quench_evolve(const ModelSpec& model, const QuenchProtocol& protocol);

struct RatePoint {
    double rate = 0.0;
    double defect_density = 0.0;
    double duration = 0.0;
};

struct KibbleZurekSweep {
    std::vector<RatePoint> points;
    double zeta_fit = 0.0;       // slope of log defect density vs log rate
    double zeta_predicted = 0.0; // d / (phi (p + 1)) for the model's exponents
};

KibbleZurekSweep kz_sweep(const ModelSpec& model, const QuenchProtocol& base,
                          const std::vector<double>& rates);

// Full 2^N Hamiltonian for small-system cross-checks (N <= 12).
Eigen::MatrixXd dense_hamiltonian(const ModelSpec& model, double field, double transverse_field);

// Bond-averaged deviation from perfect transverse alignment:
// mean over bonds of (1 - C_i)/2 with C_i = 2<S^x_i S^x_{i+1} + S^y_i S^y_{i+1}>.
double defect_density(const Eigen::VectorXcd& state, int sites);

}
