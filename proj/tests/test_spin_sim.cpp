#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "ionxxz/common.hpp"
#include "ionxxz/spin_sim.hpp"

using namespace ionxxz;

namespace {

ModelSpec chain(int sites, double sigma, double lambda) {
    ModelSpec m;
    m.sites = sites;
    m.sigma = sigma;
    m.lambda = lambda;
    m.coupling = 1.0;
    m.spin = 0.5;
    return m;
}

Eigen::VectorXd dense_spectrum(const ModelSpec& model, double field, double transverse) {
    const Eigen::MatrixXd h = dense_hamiltonian(model, field, transverse);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

} // namespace

TEST_SUITE("spin_sim") {

TEST_CASE("power-law couplings and explicit overrides") {
    const Eigen::MatrixXd j = spin_couplings(chain(5, 2.0, 0.0));
    CHECK(j(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(j(0, 3) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(j == j.transpose().eval());

    ModelSpec custom = chain(3, 2.0, 0.0);
    Eigen::MatrixXd mine = Eigen::MatrixXd::Constant(3, 3, 0.2);
    mine.diagonal().setZero();
    custom.explicit_couplings = mine;
    CHECK(spin_couplings(custom)(0, 2) == doctest::Approx(0.2).epsilon(1e-14));

    custom.explicit_couplings = Eigen::MatrixXd::Zero(2, 2); // wrong size for 3 sites
    CHECK_THROWS_AS(spin_couplings(custom), error);
    CHECK_THROWS_AS(spin_couplings(chain(1, 2.0, 0.0)), error);
}

// Two sites admit a full closed form: sector energies -h - lam J/4 and
// lam J/4 -+ J/2; four eigenvalues checked against random draws.
TEST_CASE("dense hamiltonian reproduces the two-site closed form") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ulam(0.0, 1.0), uh(0.0, 1.5);
    for (int trial = 0; trial < 25; ++trial) {
        const double lam = ulam(rng), h = uh(rng);
        const ModelSpec model = chain(2, 2.3, lam);
        Eigen::Vector4d want{-h - lam / 4.0, h - lam / 4.0, lam / 4.0 - 0.5, lam / 4.0 + 0.5};
        std::sort(want.data(), want.data() + 4);
        const Eigen::VectorXd got = dense_spectrum(model, h, 0.0);
        for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-13).scale(1.0));
    }
}

TEST_CASE("equal-coupling heisenberg point has the su(2) ground energy") {
    ModelSpec model = chain(3, 2.0, 1.0);
    Eigen::MatrixXd j = Eigen::MatrixXd::Constant(3, 3, 1.0);
    j.diagonal().setZero();
    model.explicit_couplings = j;
    const Eigen::VectorXd spec = dense_spectrum(model, 0.0, 0.0);
    // -J/2 [S(S+1) - 3 s(s+1)] at S = 3/2
    CHECK(spec[0] == doctest::Approx(-0.75).epsilon(1e-13));
}

TEST_CASE("transverse term couples single flips with amplitude -hx/2") {
    const Eigen::MatrixXd h = dense_hamiltonian(chain(2, 2.3, 0.0), 0.0, 0.3);
    CHECK(h(0, 1) == doctest::Approx(-0.15).epsilon(1e-14));
    CHECK(h(0, 2) == doctest::Approx(-0.15).epsilon(1e-14));
    CHECK(h(0, 3) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14)); // double flip
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sector scan matches the dense spectrum site by site") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ulam(0.0, 0.9), usig(1.5, 3.5);
    for (int trial = 0; trial < 4; ++trial) {
        const ModelSpec model = chain(6, usig(rng), ulam(rng));
        std::vector<double> fields{0.0, 0.2, 0.45, 0.8, 1.3};
        const GroundStateScan scan = ground_state_scan(model, fields);
        REQUIRE(scan.rows.size() == fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const Eigen::VectorXd spec = dense_spectrum(model, fields[i], 0.0);
            const MagnetizationStep& row = scan.rows[i];
            CHECK(row.energy == doctest::Approx(spec[0]).epsilon(1e-11).scale(1.0));
        }
    }
}

TEST_CASE("xx chain magnetization climbs in unit steps to saturation") {
    const ModelSpec model = chain(8, 2.3, 0.0);
    const CriticalFieldEstimate hc = finite_size_critical_field(model);
    std::vector<double> fields;
    for (int i = 0; i <= 120; ++i) fields.push_back(1.25 * hc.one_magnon * i / 120.0);
    const GroundStateScan scan = ground_state_scan(model, fields);

    REQUIRE(scan.crossings.size() == 4); // m = 0 through m = 4 at half filling start
    double prev = scan.crossings.front().field;
    for (std::size_t i = 0; i < scan.crossings.size(); ++i) {
        CHECK(scan.crossings[i].sector_high == scan.crossings[i].sector_low + 1);
        if (i > 0) {
            CHECK(scan.crossings[i].field > prev);
            prev = scan.crossings[i].field;
        }
    }
    // saturation crossing is exactly the one-magnon instability
    CHECK(scan.crossings.back().field == doctest::Approx(hc.one_magnon).epsilon(1e-12));
    CHECK(scan.rows.front().m_z == doctest::Approx(0.0).scale(1.0));
    CHECK(scan.rows.back().m_z == doctest::Approx(4.0));
}

TEST_CASE("ising-dominated chain saturates first order") {
    const ModelSpec model = chain(8, 2.3, 1.5);
    std::vector<double> fields{0.0, 0.1, 0.5, 1.0};
    const GroundStateScan scan = ground_state_scan(model, fields);
    CHECK(scan.crossings.empty());
    CHECK(scan.rows.front().m_z == doctest::Approx(4.0)); // degenerate pair resolved upward
}

TEST_CASE("one-magnon field vanishes at the heisenberg point") {
    const CriticalFieldEstimate hc = finite_size_critical_field(chain(9, 2.0, 1.0));
    CHECK(std::abs(hc.one_magnon) < 1e-12);
}

TEST_CASE("twelve-site one-magnon field matches the frozen eigenvalue") {
    const CriticalFieldEstimate hc = finite_size_critical_field(chain(12, 2.0, 0.0));
    CHECK(hc.one_magnon == doctest::Approx(1.3694145438289869).epsilon(1e-10));
}

TEST_CASE("iterative sector solver agrees with the dense path") {
    const ModelSpec model = chain(8, 2.3, 0.6);
    std::vector<double> fields{0.0, 0.3, 0.9};
    const GroundStateScan dense = ground_state_scan(model, fields);
    ScanOptions opts;
    opts.dense_limit = 1; // force Lanczos everywhere
    const GroundStateScan kry = ground_state_scan(model, fields, opts);
    REQUIRE(dense.sectors.size() == kry.sectors.size());
    for (std::size_t s = 0; s < dense.sectors.size(); ++s) {
        CHECK(kry.sectors[s].iterative == (kry.sectors[s].dimension > 1));
        CHECK(kry.sectors[s].ground_energy ==
              doctest::Approx(dense.sectors[s].ground_energy).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("defect density distinguishes aligned and bonded states") {
    Eigen::VectorXcd up = Eigen::VectorXcd::Zero(16);
    up[15] = 1.0; // all spins up
    CHECK(defect_density(up, 4) == doctest::Approx(0.5).epsilon(1e-14));

    Eigen::VectorXcd bond = Eigen::VectorXcd::Zero(4);
    bond[1] = bond[2] = 1.0 / std::sqrt(2.0); // in-plane ferromagnetic pair
    CHECK(defect_density(bond, 2) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("sudden ramp leaves the state behind") {
    QuenchProtocol fast;
    fast.rate = 1000.0;
    fast.tolerance = 1e-6;
    const QuenchResult r = quench_evolve(chain(6, 2.3, 0.5), fast);
    CHECK(r.fidelity_vs_initial > 0.999);
    CHECK(r.norm_drift < 1e-12);
}

TEST_CASE("slow ramp lands on the seeded final ground state") {
    QuenchProtocol slow;
    slow.rate = 0.002;
    slow.tolerance = 1e-6;
    const QuenchResult r = quench_evolve(chain(6, 2.3, 0.5), slow);
    CHECK(r.fidelity_vs_final_ground > 0.99);
    CHECK(r.norm_drift < 1e-12);
    CHECK(r.accepted_steps > 0);
    CHECK(r.duration == doctest::Approx(1.0 / 0.002).epsilon(1e-12)); // (h_start - h_final)/rate
}

TEST_CASE("propagation is deterministic down to the last bit") {
    QuenchProtocol p;
    p.rate = 0.05;
    p.tolerance = 1e-6;
    const QuenchResult a = quench_evolve(chain(5, 2.3, 0.5), p);
    const QuenchResult b = quench_evolve(chain(5, 2.3, 0.5), p);
    REQUIRE(a.state.size() == b.state.size());
    for (Eigen::Index i = 0; i < a.state.size(); ++i) CHECK(a.state[i] == b.state[i]);
    CHECK(a.defect_density == b.defect_density);
}

TEST_CASE("tighter tolerance does not move the endpoint") {
    QuenchProtocol loose, tight;
    loose.rate = tight.rate = 0.05;
    loose.tolerance = 1e-6;
    tight.tolerance = 1e-9;
    const QuenchResult a = quench_evolve(chain(6, 2.3, 0.5), loose);
    const QuenchResult b = quench_evolve(chain(6, 2.3, 0.5), tight);
    const std::complex<double> overlap = b.state.dot(a.state);
    CHECK(std::norm(overlap) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("protocol overrides and guards") {
    QuenchProtocol p;
    p.rate = 0.5;
    p.tolerance = 1e-6;
    p.critical_field = 0.6;
    p.final_fidelity = false;
    const QuenchResult r = quench_evolve(chain(5, 2.3, 0.5), p);
    CHECK(r.critical_field == doctest::Approx(0.6));
    CHECK(std::isnan(r.fidelity_vs_final_ground));
    CHECK(r.duration == doctest::Approx(1.0 / 0.5).epsilon(1e-12));

    QuenchProtocol bad = p;
    bad.rate = 0.0;
    CHECK_THROWS_AS(quench_evolve(chain(5, 2.3, 0.5), bad), error);
    bad = p;
    bad.h_final = 2.0; // above h_start
    CHECK_THROWS_AS(quench_evolve(chain(5, 2.3, 0.5), bad), error);
    bad = p;
    bad.seed_anchor = 0.1; // below the critical field
    CHECK_THROWS_AS(quench_evolve(chain(5, 2.3, 0.5), bad), error);
    CHECK_THROWS_AS(quench_evolve(chain(15, 2.3, 0.5), p), error);
    CHECK_THROWS_AS(ground_state_scan(chain(17, 2.3, 0.0), {0.0}), error);
}

TEST_CASE("defect density falls as the ramp slows") {
    QuenchProtocol base;
    base.tolerance = 1e-6;
    const KibbleZurekSweep sweep = kz_sweep(chain(6, 2.3, 0.5), base, {0.1, 0.02});
    REQUIRE(sweep.points.size() == 2);
    CHECK(sweep.points[0].rate == doctest::Approx(0.1));
    CHECK(sweep.points[0].defect_density > sweep.points[1].defect_density);
    CHECK(sweep.zeta_fit > 0.0);
    CHECK(sweep.zeta_predicted == doctest::Approx(0.3846153846153846).epsilon(1e-12));
    CHECK_THROWS_AS(kz_sweep(chain(6, 2.3, 0.5), base, {0.1}), error);
}

}
