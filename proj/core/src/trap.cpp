#include "ionxxz/trap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ionxxz/common.hpp"

namespace ionxxz {

namespace {

void validate(const TrapSpec& spec) {
    if (spec.ion_count < 1) throw error("trap", "ion_count must be >= 1");
    if (spec.axial_frequency <= 0 || spec.radial_frequency <= 0 || spec.ion_mass <= 0 ||
        spec.ion_charge < 1)
        throw error("trap", "physical quantities must be strictly positive");
    if (spec.length_scale_mode == LengthScaleMode::physical &&
        spec.radial_frequency < 3.0 * spec.axial_frequency)
        throw error("trap", "omega_x must exceed omega_z by at least 3x for a linear chain");
}

// Force balance F_i = u_i - sum_{j!=i} sgn(u_i-u_j) / (u_i-u_j)^2.
Eigen::VectorXd force_residual(const Eigen::VectorXd& u) {
    const int n = static_cast<int>(u.size());
    Eigen::VectorXd f = u;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = u[i] - u[j];
            f[i] -= (d > 0 ? 1.0 : -1.0) / (d * d);
        }
    return f;
}

Eigen::MatrixXd hessian_at(const Eigen::VectorXd& u) {
    const int n = static_cast<int>(u.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = 2.0 / std::pow(std::abs(u[i] - u[j]), 3);
            diag += w;
            a(i, j) = -w;
        }
        a(i, i) = diag;
    }
    return 0.5 * (a + a.transpose()); // explicit symmetrization
}

} // namespace

IonChain solve_equilibrium(const TrapSpec& spec) {
    validate(spec);
    const int n = spec.ion_count;
    if (n == 1) return IonChain{{0.0}, 0.0, true};

    // Evenly spaced start scaled ~ N^0.56 to land near the true extent.
    const double half_span = 0.48 * std::pow(double(n), 0.56) * 2.0;
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = -half_span + 2.0 * half_span * i / (n - 1);

    constexpr double tol = 1e-12;
    constexpr int max_iter = 200;
    double fnorm = force_residual(u).cwiseAbs().maxCoeff();
    int stalls = 0;
    for (int it = 0; it < max_iter && fnorm > tol; ++it) {
        const Eigen::VectorXd f = force_residual(u);
        const Eigen::VectorXd step = hessian_at(u).ldlt().solve(-f);
        double alpha = 1.0;
        bool accepted = false;
        for (int k = 0; k < 12; ++k, alpha *= 0.5) {
            Eigen::VectorXd trial = u + alpha * step;
            std::sort(trial.data(), trial.data() + n);
            const double fn = force_residual(trial).cwiseAbs().maxCoeff();
            if (fn < fnorm) {
                u = trial;
                fnorm = fn;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // Gradient-descent fallback on the trap potential.
            if (++stalls > 8)
                throw error("trap", "equilibrium solve stalled at N=" + std::to_string(n) +
                                        ", residual=" + std::to_string(fnorm));
            u -= 0.02 * f;
            std::sort(u.data(), u.data() + n);
            fnorm = force_residual(u).cwiseAbs().maxCoeff();
        }
    }
    if (fnorm > 1e-10)
        throw error("trap", "equilibrium did not converge for N=" + std::to_string(n) +
                                ", residual=" + std::to_string(fnorm));

    // Symmetrize exactly: the solution is unique and u -> -u symmetric.
    Eigen::VectorXd sym(n);
    for (int i = 0; i < n; ++i) sym[i] = 0.5 * (u[i] - u[n - 1 - i]);
    const double mean = sym.mean();
    sym.array() -= mean;
    const double res = force_residual(sym).cwiseAbs().maxCoeff();

    IonChain chain;
    chain.positions.assign(sym.data(), sym.data() + n);
    chain.residual = res;
    chain.solved = true;
    return chain;
}

IonChain equidistant_chain(int n, double spacing) {
    if (n < 2) throw error("trap", "equidistant chain needs N >= 2");
    if (spacing <= 0) throw error("trap", "spacing must be positive");
    IonChain chain;
    chain.positions.resize(n);
    for (int i = 0; i < n; ++i) chain.positions[i] = (i - 0.5 * (n - 1)) * spacing;
    Eigen::Map<const Eigen::VectorXd> u(chain.positions.data(), n);
    chain.residual = force_residual(u).cwiseAbs().maxCoeff();
    chain.solved = false;
    return chain;
}

PhononSpectrum longitudinal_modes(const IonChain& chain) {
    const int n = static_cast<int>(chain.positions.size());
    if (n < 1) throw error("trap", "empty chain");
    for (int i = 0; i + 1 < n; ++i)
        if (!(chain.positions[i] < chain.positions[i + 1]))
            throw error("trap", "positions must be strictly increasing");

    PhononSpectrum spec;
    if (n == 1) {
        spec.frequencies = Eigen::VectorXd::Ones(1);
        spec.mode_matrix = Eigen::MatrixXd::Ones(1, 1);
        return spec;
    }

    Eigen::Map<const Eigen::VectorXd> u(chain.positions.data(), n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian_at(u));
    if (es.info() != Eigen::Success) throw error("trap", "mode eigensolver failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    if (ev[0] <= 0)
        throw error("trap", "negative Hessian eigenvalue: positions are not a valid chain");

    spec.frequencies = ev.cwiseSqrt();
    spec.mode_matrix = es.eigenvectors();
    // Deterministic column signs: component sum positive, else first
    // significant component positive (fixes the COM column to +1/sqrt(N)).
    for (int l = 0; l < n; ++l) {
        auto col = spec.mode_matrix.col(l);
        double s = col.sum();
        if (std::abs(s) < 1e-8) {
            for (int i = 0; i < n; ++i)
                if (std::abs(col[i]) > 1e-8) {
                    s = col[i];
                    break;
                }
        }
        if (s < 0) col = -col;
    }
    return spec;
}

Eigen::MatrixXd lamb_dicke_parameters(const TrapSpec& spec, const PhononSpectrum& spectrum,
                                      double delta_k) {
    validate(spec);
    if (spec.length_scale_mode != LengthScaleMode::physical)
        throw error("trap", "Lamb-Dicke parameters need physical trap scales");
    const int n = static_cast<int>(spectrum.frequencies.size());
    Eigen::MatrixXd eta(n, n);
    for (int l = 0; l < n; ++l) {
        const double omega = spectrum.frequencies[l] * spec.axial_frequency;
        eta.col(l) = delta_k / std::sqrt(2.0 * spec.ion_mass * omega) *
                     spectrum.mode_matrix.col(l);
    }
    return eta;
}

RwaReport check_rwa(const TrapSpec& spec, const PhononSpectrum& spectrum,
                    const Eigen::MatrixXd& lamb_dicke, double rabi, double dressing_rabi,
                    double field_rabi, double detuning, double threshold) {
    const int n = static_cast<int>(spectrum.frequencies.size());
    if (lamb_dicke.rows() != n || lamb_dicke.cols() != n)
        throw error("trap", "Lamb-Dicke matrix shape mismatch");
    RwaReport report;
    report.threshold = threshold;
    report.pass = true;
    for (int l = 0; l < n; ++l) {
        const double omega = spectrum.frequencies[l] * spec.axial_frequency;
        const double gap = std::abs(detuning - omega);
        for (int i = 0; i < n; ++i) {
            RwaEntry e;
            e.ion = i;
            e.mode = l;
            if (gap == 0.0) {
                e.resonance = true;
                e.carrier_ratio = e.dressing_ratio = e.field_ratio =
                    std::numeric_limits<double>::infinity();
            } else {
                e.carrier_ratio = std::abs(lamb_dicke(i, l)) * rabi / gap;
                e.dressing_ratio = dressing_rabi / gap;
                e.field_ratio = field_rabi / gap;
            }
            const double worst = std::max({e.carrier_ratio, e.dressing_ratio, e.field_ratio});
            report.worst_ratio = std::max(report.worst_ratio, worst);
            if (e.resonance || worst > threshold) report.pass = false;
            report.entries.push_back(e);
        }
    }
    return report;
}

}
