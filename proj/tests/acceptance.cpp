// Acceptance gate: ten go/no-go checks over the full pipeline, one verdict
// line each. Exit status is the number of failed criteria.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ionxxz/common.hpp"
#include "ionxxz/couplings.hpp"
#include "ionxxz/exponents.hpp"
#include "ionxxz/model_map.hpp"
#include "ionxxz/rg_flow.hpp"
#include "ionxxz/spin_sim.hpp"
#include "ionxxz/trap.hpp"

using namespace ionxxz;

namespace {

constexpr double kPi = 3.141592653589793238463;

struct Checker {
    bool ok = true;
    std::string detail;
    std::string note;

    void require(bool cond, const std::string& what) {
        if (ok && !cond) {
            ok = false;
            detail = what;
        }
    }
    void close(double got, double want, double tol, const std::string& what) {
        if (!ok) return;
        const double err = std::abs(got - want);
        if (!(err <= tol)) {
            ok = false;
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s: got %.12g, want %.12g (|err| %.3g > %.3g)",
                          what.c_str(), got, want, err, tol);
            detail = buf;
        }
    }
    void close_rel(double got, double want, double tol, const std::string& what) {
        close(got, want, tol * std::max(1.0, std::abs(want)), what);
    }
};

ModelSpec chain(int sites, double sigma, double lambda) {
    ModelSpec m;
    m.sites = sites;
    m.sigma = sigma;
    m.lambda = lambda;
    return m;
}

// 1. equilibria and normal modes: closed-form small chains to 1e-10 and the
//    exact center-of-mass frequency for every size up to 20.
void criterion_modes(Checker& c) {
    TrapSpec s2;
    s2.ion_count = 2;
    const PhononSpectrum m2 = longitudinal_modes(solve_equilibrium(s2));
    c.close_rel(m2.frequencies[0], 1.0, 1e-10, "N=2 com mode");
    c.close_rel(m2.frequencies[1], std::sqrt(3.0), 1e-10, "N=2 tilt mode");

    TrapSpec s3;
    s3.ion_count = 3;
    const PhononSpectrum m3 = longitudinal_modes(solve_equilibrium(s3));
    c.close_rel(m3.frequencies[0], 1.0, 1e-10, "N=3 com mode");
    c.close_rel(m3.frequencies[1], std::sqrt(3.0), 1e-10, "N=3 tilt mode");
    c.close_rel(m3.frequencies[2], std::sqrt(29.0 / 5.0), 1e-10, "N=3 breathing mode");

    for (int n = 2; n <= 20; ++n) {
        TrapSpec s;
        s.ion_count = n;
        const PhononSpectrum m = longitudinal_modes(solve_equilibrium(s));
        c.close_rel(m.frequencies[0], 1.0, 1e-10, "com mode at N=" + std::to_string(n));
    }
}

// 2. power-law regression recovers exact synthetic exponents to 1e-10.
void criterion_fit(Checker& c) {
    for (double sigma : {0.5, 1.7, 2.3, 3.0}) {
        CouplingMatrix m;
        m.size = 12;
        m.r0 = 1.0;
        m.values = Eigen::MatrixXd::Zero(12, 12);
        m.distances = Eigen::MatrixXd::Zero(12, 12);
        for (int i = 0; i < 12; ++i)
            for (int k = 0; k < 12; ++k)
                if (i != k) {
                    m.distances(i, k) = std::abs(i - k);
                    m.values(i, k) = 0.8 * std::pow(std::abs(i - k), -sigma);
                }
        const PowerLawFit fit = fit_power_law(m);
        c.close(fit.exponent, sigma, 1e-10, "exponent at sigma=" + std::to_string(sigma));
        c.close_rel(fit.amplitude, 0.8, 1e-10, "amplitude at sigma=" + std::to_string(sigma));
    }
}

// 3. ten-ion detuning sweep: monotone range tuning in both chain variants,
//    from the collective limit (sigma <= 0.3) out to the dipolar edge
//    (sigma in [2.5, 3]) on the weakly coupled equidistant chain.
void criterion_sweep(Checker& c) {
    TrapSpec spec;
    spec.ion_count = 10;
    for (ChainMode mode : {ChainMode::equidistant, ChainMode::real}) {
        const char* tag = mode == ChainMode::real ? "real" : "equidistant";
        const std::vector<DetuningPoint> pts = detuning_sweep(spec, mode, {}, {});
        c.require(pts.size() == 200, std::string(tag) + ": unexpected grid size");
        double last_dt = -1e300, last_sigma = -1e300;
        double first = 0.0, last = 0.0;
        bool have_first = false;
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
            c.require(it->ok, std::string(tag) + " point failed: " + it->message);
            if (!c.ok) return;
            c.require(it->delta_tilde > last_dt, std::string(tag) + ": grid not ascending");
            c.require(it->sigma >= last_sigma - 1e-9,
                      std::string(tag) + ": sigma not monotone in delta_tilde");
            last_dt = it->delta_tilde;
            last_sigma = it->sigma;
            if (!have_first) {
                first = it->sigma;
                have_first = true;
            }
            last = it->sigma;
        }
        c.require(first <= 0.3, std::string(tag) + ": collective end sigma > 0.3");
        if (mode == ChainMode::equidistant)
            c.require(last >= 2.5 && last <= 3.0,
                      std::string(tag) + ": dipolar end sigma outside [2.5, 3]");
        else
            c.require(last > 0.3 && last < 1.0,
                      std::string(tag) + ": strongly coupled chain left the collective window");
    }
}

// 4. exponent formulas at the tabulated points to 1e-6.
void criterion_exponents(Checker& c) {
    const ExponentSet a = exponent_set(2.3, 1.0);
    c.close(a.phi, 1.3, 1e-12, "phi(2.3)");
    c.close(a.beta_z, 0.769231, 1e-6, "beta_z(2.3)");
    c.close(exponent_set(1.7, 1.0).beta_z, 1.0, 1e-12, "beta_z(1.7)");
    c.close(exponent_set(3.0, 1.0).beta_z, 0.5, 1e-12, "beta_z(3.0)");
    c.close(quench_exponents(2.3, 1.0, 1.0).zeta, 0.384615, 1e-6, "zeta(2.3, p=1)");
}

// 5. flow integrator against the closed-form solution (1e-8 on a random
//    ensemble) plus convergence onto the correct fixed point to 1e-6.
void criterion_rg(Checker& c) {
    std::mt19937 rng(987654);
    std::uniform_real_distribution<double> ueps(-0.5, 0.5), uphi(0.5, 2.0), ub(-10.0, 0.0),
        ug(0.01, 1.0), umu(0.0, 0.5);
    for (int i = 0; i < 100 && c.ok; ++i) {
        const double eps = ueps(rng), phi = uphi(rng), b_min = ub(rng), mu0 = umu(rng);
        double g0 = ug(rng);
        if (eps > 0.0) g0 = std::min(g0, 0.9 * eps * kPi);
        RGState start;
        start.g_tilde = g0;
        start.mu_tilde = mu0;
        const RGTrajectory traj = integrate_flow(start, eps, phi, kPi, b_min);
        const RGState& got = traj.states.back();
        const RGState want = closed_form_flow(g0, mu0, got.b, eps, phi, kPi);
        c.close_rel(got.g_tilde, want.g_tilde, 1e-8, "g vs closed form, instance " + std::to_string(i));
        c.close_rel(got.mu_tilde, want.mu_tilde, 1e-8,
                    "mu vs closed form, instance " + std::to_string(i));
    }

    RGState above;
    above.g_tilde = 0.5;
    const RGTrajectory to_wf = integrate_flow(above, 0.3, 1.3, kPi, -80.0);
    c.close(to_wf.states.back().g_tilde, 0.3 * kPi, 1e-6, "eps=0.3 fixed point");
    const RGTrajectory to_zero = integrate_flow(above, -0.3, 0.7, kPi, -80.0);
    c.close(to_zero.states.back().g_tilde, 0.0, 1e-6, "eps=-0.3 fixed point");
}

// 6. equation of state: density slope d/phi to 1e-6 and the magnetization
//    prefactor window (exactly 1 below threshold, eps*D in (0, 0.3] above).
void criterion_eos(Checker& c) {
    for (double eps : {0.1, 0.3, 0.5}) {
        const ExponentSet es = exponent_set(2.0 + eps, 1.0);
        const double n1 = equation_of_state(1e-4, es).n;
        const double n2 = equation_of_state(1e-2, es).n;
        const double slope = std::log(n2 / n1) / std::log(100.0);
        c.close(slope, es.d / es.phi, 1e-6, "density slope at eps=" + std::to_string(eps));

        const double d = prefactor_D(2.0 + eps, 1.0, 0.5);
        c.require(eps * d > 0.0 && eps * d <= 0.3,
                  "eps*D outside (0, 0.3] at eps=" + std::to_string(eps));
    }
    c.require(prefactor_D(1.5, 1.0, 0.5) == 1.0, "D must be exactly 1 at sigma=1.5");
    c.require(prefactor_D(2.0, 1.0, 0.5) == 1.0, "D must be exactly 1 at sigma=2.0");
}

// 7. lattice dispersion scales as k^min(2, sigma-1) within 0.02 in the
//    small-k decade.
void criterion_dispersion(Checker& c) {
    for (double sigma : {1.2, 1.5, 2.0, 2.5, 3.5, 5.0}) {
        ModelSpec model;
        model.sigma = sigma;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int pts = 5;
        for (int i = 0; i < pts; ++i) {
            const double k = 1e-3 * std::pow(10.0, i / double(pts - 1));
            const double x = std::log(k), y = std::log(magnon_dispersion(k, model));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (pts * sxy - sx * sy) / (pts * sxx - sx * sx);
        c.close(slope, std::min(2.0, sigma - 1.0), 0.02,
                "dispersion slope at sigma=" + std::to_string(sigma));
    }
}

// 8. diagonalization: exact two-site crossing, sector scan vs the dense
//    spectrum to 1e-10, unit magnetization steps, and the 12-site
//    one-magnon field within 10% of the infinite-chain tail sum.
void criterion_ed(Checker& c) {
    ModelSpec two = chain(2, 2.3, 0.0);
    Eigen::MatrixXd j2(2, 2);
    j2 << 0.0, 1.0, 1.0, 0.0;
    two.explicit_couplings = j2;
    std::vector<double> f2{0.0, 0.3, 0.7};
    const GroundStateScan s2 = ground_state_scan(two, f2);
    c.require(s2.crossings.size() == 1, "two-site scan must cross once");
    if (c.ok) c.close(s2.crossings[0].field, 0.5, 1e-10, "two-site crossing");

    const ModelSpec m8 = chain(8, 2.3, 0.7);
    std::vector<double> fields{0.0, 0.2, 0.5, 0.9, 1.4};
    const GroundStateScan s8 = ground_state_scan(m8, fields);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const Eigen::MatrixXd h = dense_hamiltonian(m8, fields[i], 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
        c.close(s8.rows[i].energy, es.eigenvalues()[0], 1e-10,
                "sector vs dense at h=" + std::to_string(fields[i]));
    }

    const ModelSpec xx = chain(8, 2.3, 0.0);
    const double hc8 = finite_size_critical_field(xx).one_magnon;
    std::vector<double> grid;
    for (int i = 0; i <= 96; ++i) grid.push_back(1.2 * hc8 * i / 96.0);
    const GroundStateScan sx = ground_state_scan(xx, grid);
    c.require(sx.crossings.size() == 4, "xx chain must climb through 4 crossings");
    for (const SectorCrossing& cr : sx.crossings)
        c.require(cr.sector_high == cr.sector_low + 1, "magnetization step larger than one");

    const double hc12 = finite_size_critical_field(chain(12, 2.0, 0.0)).one_magnon;
    const double target = 1.306375748570012639277; // sum_r (N-r)/(N r^2) at N=12
    c.require(std::abs(hc12 - target) <= 0.1 * target,
              "12-site one-magnon field misses the tail-sum target by more than 10%");
}

// 9. quench engine: unitary to 1e-8, sudden and adiabatic limits, and a
//    positive defect-density slope across a rate sweep.
void criterion_quench(Checker& c) {
    const ModelSpec m8 = chain(8, 2.3, 0.5);
    const double hc = finite_size_critical_field(m8).one_magnon;

    QuenchProtocol slow;
    slow.h_start = 1.5 * hc;
    slow.rate = 0.001;
    slow.tolerance = 1e-6;
    const QuenchResult adiabatic = quench_evolve(m8, slow);
    c.require(adiabatic.norm_drift < 1e-8, "norm drift exceeded 1e-8");
    c.require(adiabatic.fidelity_vs_final_ground > 0.99,
              "adiabatic fidelity " + std::to_string(adiabatic.fidelity_vs_final_ground) +
                  " below 0.99");

    QuenchProtocol sudden = slow;
    sudden.rate = 1000.0;
    sudden.final_fidelity = false;
    const QuenchResult frozen = quench_evolve(m8, sudden);
    c.require(frozen.fidelity_vs_initial > 0.999, "sudden quench moved the state");

    const ModelSpec m10 = chain(10, 2.3, 0.5);
    QuenchProtocol base;
    base.h_start = 1.5 * finite_size_critical_field(m10).one_magnon;
    base.tolerance = 1e-6;
    const KibbleZurekSweep sweep = kz_sweep(m10, base, {0.1, 0.05, 0.02, 0.01, 0.005});
    for (const RatePoint& pt : sweep.points)
        c.require(pt.defect_density > 0.0, "defect density must stay positive");
    c.require(sweep.zeta_fit > 0.0, "defect density must fall for slower ramps");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "F_adiabatic %.5f, zeta_fit %.3f (predicted %.3f)",
                  adiabatic.fidelity_vs_final_ground, sweep.zeta_fit, sweep.zeta_predicted);
    c.note = buf;
}

// 10. mean-field lobe identity to 1e-12 across the full anisotropy range.
void criterion_boundary(Checker& c) {
    const double theta_max = std::atan(1.0 / std::sqrt(2.0));
    std::vector<double> thetas;
    for (int i = 0; i <= 40; ++i) thetas.push_back(theta_max * i / 40.0);
    const std::vector<PhaseBoundaryPoint> lobe = phase_boundary(thetas, 1.7, 0.5);
    const double omega0 = 0.5 * 0.5 * 1.7;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double th = thetas[i];
        const double want =
            omega0 * (std::cos(th) * std::cos(th) - 2.0 * std::sin(th) * std::sin(th));
        c.close(lobe[i].omega_h_crit, want, 1e-12, "lobe value at theta=" + std::to_string(th));
        c.close(lobe[i].lambda, 2.0 * std::tan(th) * std::tan(th), 1e-12,
                "anisotropy at theta=" + std::to_string(th));
    }
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void(Checker&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "equilibrium chains and longitudinal modes", criterion_modes},
        {2, "power-law fit recovers synthetic exponents", criterion_fit},
        {3, "detuning sweep tunes sigma monotonically", criterion_sweep},
        {4, "critical exponent table", criterion_exponents},
        {5, "flow integrator vs closed form and fixed points", criterion_rg},
        {6, "equation of state and magnetization prefactor", criterion_eos},
        {7, "lattice dispersion exponent", criterion_dispersion},
        {8, "sector diagonalization and level crossings", criterion_ed},
        {9, "quench propagator limits and defect scaling", criterion_quench},
        {10, "mean-field phase boundary identity", criterion_boundary},
    };

    int failures = 0;
    for (const Criterion& cr : criteria) {
        Checker check;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.ok = false;
            check.detail = std::string("exception: ") + e.what();
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (check.ok) {
            std::printf("[PASS] %2d %s%s%s (%.2f s)\n", cr.id, cr.title,
                        check.note.empty() ? "" : " -- ", check.note.c_str(), dt);
        } else {
            ++failures;
            std::printf("[FAIL] %2d %s: %s (%.2f s)\n", cr.id, cr.title, check.detail.c_str(),
                        dt);
        }
        std::fflush(stdout);
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures;
}
