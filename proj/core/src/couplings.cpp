#include "ionxxz/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ionxxz/common.hpp"
#include "ionxxz/exponents.hpp"

namespace ionxxz {

namespace {

double center_spacing(const IonChain& chain) {
    const int n = static_cast<int>(chain.positions.size());
    if (n < 2) throw error("couplings", "need at least 2 ions");
    return chain.positions[n / 2] - chain.positions[n / 2 - 1];
}

} // namespace

CouplingMatrix effective_couplings(const IonChain& chain, const PhononSpectrum& spectrum,
                                   const BeamParams& beam, double mass,
                                   double resonance_width) {
    const int n = static_cast<int>(chain.positions.size());
    if (spectrum.frequencies.size() != n)
        throw error("couplings", "chain and spectrum sizes differ");
    if (beam.rabi < 0) throw error("couplings", "Rabi rate must be non-negative");
    if (beam.detuning <= 0) throw error("couplings", "detuning must be positive");

    const double d2 = beam.detuning * beam.detuning;
    for (int l = 0; l < n; ++l) {
        const double w2 = spectrum.frequencies[l] * spectrum.frequencies[l];
        if (std::abs(d2 - w2) <= resonance_width)
            throw error("couplings", "detuning resonant with mode " + std::to_string(l) +
                                         " (omega = " + std::to_string(spectrum.frequencies[l]) +
                                         ")");
    }

    CouplingMatrix out;
    out.size = n;
    out.r0 = center_spacing(chain);
    out.values = Eigen::MatrixXd::Zero(n, n);
    out.distances = Eigen::MatrixXd::Zero(n, n);

    const double pref = beam.rabi * beam.rabi * beam.delta_k * beam.delta_k / (2.0 * mass);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int l = 0; l < n; ++l) {
                const double w2 = spectrum.frequencies[l] * spectrum.frequencies[l];
                s += spectrum.mode_matrix(i, l) * spectrum.mode_matrix(j, l) / (d2 - w2);
            }
            out.values(i, j) = out.values(j, i) = pref * s;
            const double r = std::abs(chain.positions[j] - chain.positions[i]) / out.r0;
            out.distances(i, j) = out.distances(j, i) = r;
        }
    return out;
}

PowerLawFit fit_power_law(const CouplingMatrix& matrix, double window_min, double window_max) {
    const int n = matrix.size;
    // Bin pairs by rounded distance: the real chain has near-degenerate pair
    // separations that must share one abscissa.
    std::map<long long, std::pair<double, int>> bins; // key -> (sum |J|, count)
    std::map<long long, double> rep;                  // key -> representative r
    int sign = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double r = matrix.distances(i, j);
            if (r < window_min || r > window_max) continue;
            const double v = matrix.values(i, j);
            const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
            if (s != 0) {
                if (sign == 0) sign = s;
                else if (s != sign)
                    throw error("couplings",
                                "coupling sign change inside the fit window; power law invalid");
            }
            const long long key = std::llround(r * 1e6);
            bins[key].first += std::abs(v);
            bins[key].second += 1;
            rep[key] = r;
        }
    if (bins.size() < 3)
        throw error("couplings", "need at least 3 distinct distances in the fit window");

    std::vector<double> lx, ly;
    double rmin = 1e300, rmax = 0.0;
    for (const auto& [key, acc] : bins) {
        const double r = rep[key];
        const double j = acc.first / acc.second;
        if (j <= 0) throw error("couplings", "zero coupling in the fit window");
        lx.push_back(std::log(r));
        ly.push_back(std::log(j));
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }

    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = m * sxx - sx * sx;
    if (denom == 0) throw error("couplings", "degenerate distances in the fit window");
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;

    PowerLawFit fit;
    fit.exponent = -slope;
    fit.amplitude = std::exp(intercept);
    fit.window_min = rmin;
    fit.window_max = rmax;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double pred = intercept + slope * lx[i];
        fit.max_relative_residual =
            std::max(fit.max_relative_residual, std::abs(pred - ly[i]) / std::abs(ly[i]));
    }
    return fit;
}

std::vector<DetuningPoint> detuning_sweep(const TrapSpec& spec, ChainMode mode,
                                          std::vector<double> deltas,
                                          const SweepOptions& options) {
    const IonChain chain = mode == ChainMode::real
                               ? solve_equilibrium(spec)
                               : equidistant_chain(spec.ion_count, options.spacing);
    const PhononSpectrum spectrum = longitudinal_modes(chain);
    const double r0 = center_spacing(chain);
    const double dt_max = r0 * r0 * r0; // delta_tilde at Delta -> 0

    if (deltas.empty()) {
        if (options.points < 2) throw error("couplings", "sweep needs at least 2 points");
        deltas.reserve(options.points);
        const double llo = std::log(options.frac_min), lhi = std::log(options.frac_max);
        for (int i = 0; i < options.points; ++i) {
            const double frac = std::exp(llo + (lhi - llo) * i / (options.points - 1));
            // delta_tilde = (1 - Delta^2) R0^3 in omega_z = 1 units
            deltas.push_back(std::sqrt(1.0 - frac));
        }
        std::sort(deltas.begin(), deltas.end());
    }

    const int n = spec.ion_count;
    std::vector<DetuningPoint> out;
    out.reserve(deltas.size());
    for (double delta : deltas) {
        DetuningPoint pt;
        pt.delta = delta;
        pt.chain_mode = mode;
        pt.delta_tilde = (1.0 - delta * delta) * dt_max;
        try {
            if (delta <= 0 || delta >= 1.0)
                throw error("couplings", "longitudinal scheme needs Delta in (0, omega_z)");
            BeamParams beam;
            beam.rabi = 1.0;
            beam.delta_k = 1.0;
            beam.detuning = delta;
            CouplingMatrix cm = effective_couplings(chain, spectrum, beam);
            if (mode == ChainMode::real && options.interior_margin > 0 &&
                n > 2 * options.interior_margin + 2) {
                // Interior ions only: edge ions see a distorted local lattice.
                CouplingMatrix trimmed;
                const int m = options.interior_margin;
                trimmed.size = n - 2 * m;
                trimmed.r0 = cm.r0;
                trimmed.values = cm.values.block(m, m, trimmed.size, trimmed.size);
                trimmed.distances = cm.distances.block(m, m, trimmed.size, trimmed.size);
                cm = trimmed;
            }
            PowerLawFit fit = fit_power_law(cm);
            pt.sigma = fit.exponent;
            pt.fit_residual = fit.max_relative_residual;
            if (pt.sigma > options.dimension) {
                const ExponentSet es = exponent_set(pt.sigma, options.dimension);
                pt.beta_z = es.beta_z;
                pt.d_prefactor = prefactor_D(pt.sigma, options.dimension, options.lambda);
            } else {
                pt.beta_z = std::nan("");
                pt.d_prefactor = std::nan("");
                pt.message = "sigma <= d: no thermodynamic exponents at this detuning";
            }
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.message = e.what();
            pt.sigma = std::nan("");
            pt.beta_z = std::nan("");
            pt.d_prefactor = std::nan("");
        }
        out.push_back(pt);
    }
    return out;
}

}
