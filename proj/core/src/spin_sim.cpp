#include "ionxxz/spin_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>

#include "ionxxz/common.hpp"
#include "ionxxz/exponents.hpp"

namespace ionxxz {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

struct Hop {
    int32_t a = 0, b = 0; // basis indices, a < b
    double amplitude = 0.0;
};

double sz_bit(uint32_t s, int i) { return ((s >> i) & 1u) ? 0.5 : -0.5; }

double ising_energy(uint32_t s, const MatrixXd& j, double lambda, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double szi = sz_bit(s, i);
        for (int k = i + 1; k < n; ++k) acc += j(i, k) * szi * sz_bit(s, k);
    }
    return -lambda * acc;
}

// ---- full 2^N space ----

struct FullSpace {
    int sites = 0;
    Eigen::Index dim = 0;
    VectorXd diag_j;        // Ising part
    VectorXd diag_m;        // total S^z per basis state
    std::vector<Hop> hops;  // XY part, amplitude -J_ik / 2
    std::vector<Hop> seeds; // single flips, amplitude -1/2 (scaled by the seed field)
};

FullSpace build_full_space(const MatrixXd& j, double lambda) {
    const int n = static_cast<int>(j.rows());
    FullSpace fs;
    fs.sites = n;
    fs.dim = Eigen::Index{1} << n;
    fs.diag_j.resize(fs.dim);
    fs.diag_m.resize(fs.dim);
    for (Eigen::Index s = 0; s < fs.dim; ++s) {
        fs.diag_j[s] = ising_energy(static_cast<uint32_t>(s), j, lambda, n);
        fs.diag_m[s] = std::popcount(static_cast<uint32_t>(s)) - 0.5 * n;
    }
    for (Eigen::Index s = 0; s < fs.dim; ++s) {
        const auto us = static_cast<uint32_t>(s);
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k)
                if (((us >> i) & 1u) == 1u && ((us >> k) & 1u) == 0u) {
                    const auto t = static_cast<Eigen::Index>(us ^ (1u << i) ^ (1u << k));
                    fs.hops.push_back({static_cast<int32_t>(std::min(s, t)),
                                       static_cast<int32_t>(std::max(s, t)), -0.5 * j(i, k)});
                }
        for (int i = 0; i < n; ++i) {
            const auto t = static_cast<Eigen::Index>(us ^ (1u << i));
            if (s < t) fs.seeds.push_back({static_cast<int32_t>(s), static_cast<int32_t>(t), -0.5});
        }
    }
    return fs;
}

void apply_full(const FullSpace& fs, double h, double hx, const complex<double>* x,
                complex<double>* y) {
    for (Eigen::Index s = 0; s < fs.dim; ++s) y[s] = (fs.diag_j[s] - h * fs.diag_m[s]) * x[s];
    for (const Hop& hp : fs.hops) {
        y[hp.a] += hp.amplitude * x[hp.b];
        y[hp.b] += hp.amplitude * x[hp.a];
    }
    if (hx != 0.0)
        for (const Hop& sd : fs.seeds) {
            const double amp = sd.amplitude * hx;
            y[sd.a] += amp * x[sd.b];
            y[sd.b] += amp * x[sd.a];
        }
}

void apply_full_real(const FullSpace& fs, double h, double hx, Eigen::Ref<const VectorXd> x,
                     Eigen::Ref<VectorXd> y) {
    for (Eigen::Index s = 0; s < fs.dim; ++s) y[s] = (fs.diag_j[s] - h * fs.diag_m[s]) * x[s];
    for (const Hop& hp : fs.hops) {
        y[hp.a] += hp.amplitude * x[hp.b];
        y[hp.b] += hp.amplitude * x[hp.a];
    }
    if (hx != 0.0)
        for (const Hop& sd : fs.seeds) {
            const double amp = sd.amplitude * hx;
            y[sd.a] += amp * x[sd.b];
            y[sd.b] += amp * x[sd.a];
        }
}

// ---- fixed-magnetization sectors ----

struct SectorSpace {
    std::vector<uint32_t> states; // ascending bit patterns
    VectorXd diag;
    std::vector<Hop> hops;
};

SectorSpace build_sector(const MatrixXd& j, double lambda, int n, int ups) {
    SectorSpace sec;
    const uint32_t top = 1u << n;
    for (uint32_t s = 0; s < top; ++s)
        if (std::popcount(s) == ups) sec.states.push_back(s);
    const auto dim = static_cast<Eigen::Index>(sec.states.size());
    sec.diag.resize(dim);
    for (Eigen::Index a = 0; a < dim; ++a) sec.diag[a] = ising_energy(sec.states[a], j, lambda, n);
    for (Eigen::Index a = 0; a < dim; ++a) {
        const uint32_t s = sec.states[a];
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k)
                if (((s >> i) & 1u) == 1u && ((s >> k) & 1u) == 0u) {
                    const uint32_t t = s ^ (1u << i) ^ (1u << k);
                    const auto it = std::lower_bound(sec.states.begin(), sec.states.end(), t);
                    const auto b = static_cast<Eigen::Index>(it - sec.states.begin());
                    sec.hops.push_back({static_cast<int32_t>(std::min(a, b)),
                                        static_cast<int32_t>(std::max(a, b)), -0.5 * j(i, k)});
                }
    }
    return sec;
}

// ---- real-symmetric Lanczos ground state (uniform start: every operator
// here has nonpositive off-diagonal entries, so the ground vector is
// entrywise positive and the overlap can never vanish) ----

using ApplyReal = std::function<void(Eigen::Ref<const VectorXd>, Eigen::Ref<VectorXd>)>;

double tridiag_min_eig(const VectorXd& alpha, const VectorXd& beta, int k, VectorXd* evec) {
    MatrixXd t = MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < k) {
            t(i, i + 1) = beta[i];
            t(i + 1, i) = beta[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
    if (evec) *evec = es.eigenvectors().col(0);
    return es.eigenvalues()(0);
}

double lanczos_ground(const ApplyReal& apply, Eigen::Index dim, VectorXd* vector_out,
                      int max_iter = 250) {
    if (dim == 1) {
        VectorXd x = VectorXd::Ones(1), y(1);
        apply(x, y);
        if (vector_out) *vector_out = x;
        return y[0];
    }
    const int m = static_cast<int>(std::min<Eigen::Index>(max_iter, dim));
    MatrixXd basis(dim, m);
    VectorXd alpha(m), beta(m), work(dim), small;
    VectorXd start = VectorXd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));

    double energy = 0.0;
    for (int cycle = 0; cycle < 4; ++cycle) {
        basis.col(0) = start;
        double scale = 1.0, previous = std::numeric_limits<double>::infinity();
        int k = m;
        bool exact = false;
        for (int iter = 0; iter < m; ++iter) {
            apply(basis.col(iter), work);
            alpha[iter] = basis.col(iter).dot(work);
            work -= alpha[iter] * basis.col(iter);
            if (iter > 0) work -= beta[iter - 1] * basis.col(iter - 1);
            for (int q = 0; q <= iter; ++q) work -= basis.col(q).dot(work) * basis.col(q);
            beta[iter] = work.norm();
            scale = std::max(scale, std::abs(alpha[iter]) + beta[iter]);

            const bool breakdown = beta[iter] <= 1e-13 * scale;
            const bool last = iter + 1 == m;
            if (breakdown || last || (iter >= 8 && iter % 4 == 3)) {
                const double theta = tridiag_min_eig(alpha, beta, iter + 1, nullptr);
                if (breakdown || last || std::abs(theta - previous) <= 1e-14 * std::max(1.0, std::abs(theta))) {
                    k = iter + 1;
                    exact = breakdown;
                    break;
                }
                previous = theta;
            }
            basis.col(iter + 1) = work / beta[iter];
        }
        energy = tridiag_min_eig(alpha, beta, k, &small);
        start = basis.leftCols(k) * small;
        start.normalize();
        const double residual = k < m && !exact ? std::abs(beta[k - 1] * small[k - 1]) : 0.0;
        if (exact || residual <= 1e-11 * scale || static_cast<Eigen::Index>(m) >= dim) break;
    }
    if (vector_out) *vector_out = start;
    return energy;
}

double one_magnon_field(const MatrixXd& j, double lambda, double spin) {
    MatrixXd m = j;
    m.diagonal() -= lambda * j.rowwise().sum();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return spin * es.eigenvalues()(j.rows() - 1);
}

// ---- Krylov propagator ----

// u = exp(-i dt T_k) e1 for the tridiagonal T built from (alpha, beta).
void tridiag_exp(const VectorXd& alpha, const VectorXd& beta, int k, double dt, VectorXcd& u) {
    MatrixXd t = MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < k) {
            t(i, i + 1) = beta[i];
            t(i + 1, i) = beta[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
    const VectorXd& lam = es.eigenvalues();
    const MatrixXd& vec = es.eigenvectors();
    VectorXcd phases(k);
    for (int q = 0; q < k; ++q)
        phases[q] = std::exp(complex<double>(0.0, -dt * lam[q])) * vec(0, q);
    u = vec * phases;
}

class Propagator {
  public:
    Propagator(const FullSpace& fs, int krylov_limit)
        : fs_(fs), m_(static_cast<int>(std::min<Eigen::Index>(std::max(krylov_limit, 2), fs.dim))),
          basis_(fs.dim, m_), alpha_(m_), beta_(m_), work_(fs.dim) {}

    // exp(-i dt H(h, hx)) psi with an adaptive Krylov dimension.
    VectorXcd step(const VectorXcd& psi, double h, double hx, double dt) {
        const double weight = psi.norm();
        basis_.col(0) = psi / weight;
        double scale = 1.0;
        VectorXcd u;
        int k = m_;
        for (int j = 0; j < m_; ++j) {
            apply_full(fs_, h, hx, basis_.data() + static_cast<Eigen::Index>(j) * fs_.dim,
                       work_.data());
            alpha_[j] = basis_.col(j).dot(work_).real();
            work_ -= alpha_[j] * basis_.col(j);
            if (j > 0) work_ -= beta_[j - 1] * basis_.col(j - 1);
            for (int q = 0; q <= j; ++q) work_ -= basis_.col(q).dot(work_) * basis_.col(q);
            beta_[j] = work_.norm();
            scale = std::max(scale, std::abs(alpha_[j]) + beta_[j]);

            const bool breakdown = beta_[j] <= 1e-13 * scale;
            const bool last = j + 1 == m_;
            if (breakdown || last || j >= 3) {
                tridiag_exp(alpha_, beta_, j + 1, dt, u);
                const double tail = breakdown ? 0.0 : beta_[j] * std::abs(u[j]);
                if (breakdown || last || tail <= 1e-12) {
                    k = j + 1;
                    break;
                }
            }
            basis_.col(j + 1) = work_ / beta_[j];
        }
        return weight * (basis_.leftCols(k) * u);
    }

  private:
    const FullSpace& fs_;
    int m_;
    MatrixXcd basis_;
    VectorXd alpha_, beta_;
    VectorXcd work_;
};

void require_sites(int n, int limit, const char* what) {
    if (n > limit) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s supports at most %d sites (state space 2^%d); got %d",
                      what, limit, limit, n);
        throw error("spin", buf);
    }
}

} // namespace

MatrixXd spin_couplings(const ModelSpec& model) {
    if (model.explicit_couplings) {
        const MatrixXd& j = *model.explicit_couplings;
        if (j.rows() != j.cols() || j.rows() < 2)
            throw error("spin", "explicit coupling matrix must be square, at least 2 x 2");
        if (model.sites > 0 && j.rows() != model.sites)
            throw error("spin", "explicit coupling matrix does not match the site count");
        return j;
    }
    if (model.sites < 2) throw error("spin", "model needs at least two sites");
    if (!(model.coupling > 0.0)) throw error("spin", "coupling scale must be positive");
    if (!(model.sigma > 0.0)) throw error("spin", "sigma must be positive");
    MatrixXd j = MatrixXd::Zero(model.sites, model.sites);
    for (int a = 0; a < model.sites; ++a)
        for (int b = 0; b < model.sites; ++b)
            if (a != b) j(a, b) = model.coupling / std::pow(std::abs(a - b), model.sigma);
    return j;
}

GroundStateScan ground_state_scan(const ModelSpec& model, const std::vector<double>& fields,
                                  const ScanOptions& options) {
    const MatrixXd j = spin_couplings(model);
    const int n = static_cast<int>(j.rows());
    require_sites(n, options.max_sites, "ground_state_scan");

    GroundStateScan scan;
    scan.sectors.reserve(n + 1);
    for (int ups = 0; ups <= n; ++ups) {
        SectorSpace sec = build_sector(j, model.lambda, n, ups);
        SectorInfo info;
        info.up_count = ups;
        info.magnetization = ups - 0.5 * n;
        info.dimension = sec.states.size();
        const auto dim = static_cast<Eigen::Index>(sec.states.size());
        if (dim <= options.dense_limit) {
            MatrixXd h = MatrixXd::Zero(dim, dim);
            h.diagonal() = sec.diag;
            for (const Hop& hp : sec.hops) {
                h(hp.a, hp.b) += hp.amplitude;
                h(hp.b, hp.a) += hp.amplitude;
            }
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(h, Eigen::EigenvaluesOnly);
            info.ground_energy = es.eigenvalues()(0);
        } else {
            info.iterative = true;
            auto apply = [&sec](Eigen::Ref<const VectorXd> x, Eigen::Ref<VectorXd> y) {
                y = sec.diag.cwiseProduct(x);
                for (const Hop& hp : sec.hops) {
                    y[hp.a] += hp.amplitude * x[hp.b];
                    y[hp.b] += hp.amplitude * x[hp.a];
                }
            };
            info.ground_energy = lanczos_ground(apply, dim, nullptr);
        }
        scan.sectors.push_back(info);
    }

    scan.rows.reserve(fields.size());
    for (double h : fields) {
        MagnetizationStep row;
        row.field = h;
        double best = std::numeric_limits<double>::infinity();
        for (int ups = n; ups >= 0; --ups) { // larger magnetization wins exact ties
            const SectorInfo& info = scan.sectors[ups];
            const double e = info.ground_energy - h * info.magnetization;
            if (e < best) {
                best = e;
                row.ground_sector = ups;
                row.m_z = info.magnetization;
                row.energy = e;
            }
        }
        scan.rows.push_back(row);
    }

    for (std::size_t i = 1; i < scan.rows.size(); ++i) {
        const int a = scan.rows[i - 1].ground_sector;
        const int b = scan.rows[i].ground_sector;
        if (a == b) continue;
        const SectorInfo& sa = scan.sectors[a];
        const SectorInfo& sb = scan.sectors[b];
        SectorCrossing cross;
        cross.field = (sa.ground_energy - sb.ground_energy) / (sa.magnetization - sb.magnetization);
        cross.sector_low = sa.magnetization < sb.magnetization ? a : b;
        cross.sector_high = sa.magnetization < sb.magnetization ? b : a;
        scan.crossings.push_back(cross);
    }
    return scan;
}

CriticalFieldEstimate finite_size_critical_field(const ModelSpec& model) {
    const MatrixXd j = spin_couplings(model);
    CriticalFieldEstimate est;
    est.one_magnon = one_magnon_field(j, model.lambda, model.spin);
    est.thermodynamic = critical_field(model).value;
    return est;
}

QuenchResult quench_evolve(const ModelSpec& model, const QuenchProtocol& protocol) {
    const MatrixXd j = spin_couplings(model);
    const int n = static_cast<int>(j.rows());
    require_sites(n, 14, "quench_evolve");
    if (!(protocol.rate > 0.0)) throw error("quench", "rate must be positive");
    if (!(protocol.power > 0.0)) throw error("quench", "schedule power must be positive");
    if (!(protocol.h_start > protocol.h_final))
        throw error("quench", "ramp must run downward: h_start > h_final");
    if (!(protocol.seed_field >= 0.0)) throw error("quench", "seed field must be nonnegative");
    if (!(protocol.tolerance > 0.0)) throw error("quench", "tolerance must be positive");

    const double hc = std::isfinite(protocol.critical_field)
                          ? protocol.critical_field
                          : one_magnon_field(j, model.lambda, model.spin);
    const double anchor = std::isfinite(protocol.seed_anchor) ? protocol.seed_anchor : protocol.h_start;
    if (!(anchor > hc)) throw error("quench", "seed anchor must sit above the critical field");

    const FullSpace fs = build_full_space(j, model.lambda);
    const double seed_full = protocol.seed_field * model.coupling;
    auto field_at = [&](double t) { return protocol.h_start - protocol.rate * std::pow(t, protocol.power); };
    auto seed_at = [&](double h) {
        return seed_full * std::clamp((anchor - h) / (anchor - hc), 0.0, 1.0);
    };
    const double duration =
        std::pow((protocol.h_start - protocol.h_final) / protocol.rate, 1.0 / protocol.power);

    QuenchResult result;
    result.duration = duration;
    result.critical_field = hc;

    VectorXcd psi = VectorXcd::Zero(fs.dim);
    psi[fs.dim - 1] = 1.0; // fully polarized along +z
    Propagator prop(fs, protocol.krylov_limit);

    double t = 0.0;
    double dt = std::min(protocol.max_step, duration);
    const long step_budget = 20000000;
    while (duration - t > 1e-12 * duration) {
        dt = std::min(dt, duration - t);

        const double hm = field_at(t + 0.5 * dt);
        const VectorXcd full = prop.step(psi, hm, seed_at(hm), dt);
        const double h1 = field_at(t + 0.25 * dt);
        const double h2 = field_at(t + 0.75 * dt);
        const VectorXcd halves =
            prop.step(prop.step(psi, h1, seed_at(h1), 0.5 * dt), h2, seed_at(h2), 0.5 * dt);

        const double err = (full - halves).norm();
        const double budget = protocol.tolerance * dt;
        if (err <= budget) {
            psi = halves;
            t += dt;
            ++result.accepted_steps;
            result.norm_drift = std::max(result.norm_drift, std::abs(psi.norm() - 1.0));
            psi.normalize();
        } else {
            ++result.rejected_steps;
        }
        double factor = err > 0.0 ? 0.9 * std::cbrt(budget / err) : 4.0;
        dt *= std::clamp(factor, 0.25, 4.0);
        dt = std::min(dt, protocol.max_step);
        if (dt <= 1e-12 * std::max(1.0, duration))
            throw error("quench", "step size underflow in the propagator");
        if (result.accepted_steps + result.rejected_steps > step_budget)
            throw error("quench", "step budget exhausted; relax the tolerance or shorten the ramp");
    }

    result.state = psi;
    result.defect_density = defect_density(psi, n);
    result.fidelity_vs_initial = std::norm(psi[fs.dim - 1]);
    if (protocol.final_fidelity) {
        const double hx_end = seed_at(protocol.h_final);
        auto apply = [&](Eigen::Ref<const VectorXd> x, Eigen::Ref<VectorXd> y) {
            apply_full_real(fs, protocol.h_final, hx_end, x, y);
        };
        VectorXd ground;
        lanczos_ground(apply, fs.dim, &ground);
        complex<double> overlap = 0.0;
        for (Eigen::Index s = 0; s < fs.dim; ++s) overlap += ground[s] * psi[s];
        result.fidelity_vs_final_ground = std::norm(overlap);
    }
    return result;
}

KibbleZurekSweep kz_sweep(const ModelSpec& model, const QuenchProtocol& base,
                          const std::vector<double>& rates) {
    if (rates.size() < 2) throw error("quench", "rate sweep needs at least two rates");
    KibbleZurekSweep sweep;
    sweep.points.reserve(rates.size());
    for (double rate : rates) {
        if (!(rate > 0.0)) throw error("quench", "rates must be positive");
        QuenchProtocol point = base;
        point.rate = rate;
        point.final_fidelity = false;
        const QuenchResult qr = quench_evolve(model, point);
        sweep.points.push_back({rate, qr.defect_density, qr.duration});
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const RatePoint& pt : sweep.points) {
        if (!(pt.defect_density > 0.0))
            throw error("quench", "defect density vanished; cannot fit a power law");
        const double x = std::log(pt.rate), y = std::log(pt.defect_density);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const auto m = static_cast<double>(sweep.points.size());
    sweep.zeta_fit = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    sweep.zeta_predicted = quench_exponents(model.sigma, model.dimension, base.power).zeta;
    return sweep;
}

MatrixXd dense_hamiltonian(const ModelSpec& model, double field, double transverse_field) {
    const MatrixXd j = spin_couplings(model);
    const int n = static_cast<int>(j.rows());
    require_sites(n, 12, "dense_hamiltonian");
    const FullSpace fs = build_full_space(j, model.lambda);
    MatrixXd h = MatrixXd::Zero(fs.dim, fs.dim);
    h.diagonal() = fs.diag_j - field * fs.diag_m;
    for (const Hop& hp : fs.hops) {
        h(hp.a, hp.b) += hp.amplitude;
        h(hp.b, hp.a) += hp.amplitude;
    }
    if (transverse_field != 0.0)
        for (const Hop& sd : fs.seeds) {
            h(sd.a, sd.b) += sd.amplitude * transverse_field;
            h(sd.b, sd.a) += sd.amplitude * transverse_field;
        }
    return h;
}

double defect_density(const Eigen::VectorXcd& state, int sites) {
    if (sites < 2) throw error("spin", "defect density needs at least two sites");
    const Eigen::Index dim = Eigen::Index{1} << sites;
    if (state.size() != dim) throw error("spin", "state dimension does not match the site count");
    double rho = 0.0;
    for (int i = 0; i + 1 < sites; ++i) {
        complex<double> acc = 0.0;
        for (Eigen::Index s = 0; s < dim; ++s) {
            const auto us = static_cast<uint32_t>(s);
            if (((us >> i) & 1u) == 0u && ((us >> (i + 1)) & 1u) == 1u) {
                const auto t = static_cast<Eigen::Index>(us ^ (1u << i) ^ (1u << (i + 1)));
                acc += std::conj(state[t]) * state[s];
            }
        }
        rho += 0.5 * (1.0 - 2.0 * acc.real());
    }
    return rho / (sites - 1);
}

}
