#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ionxxz/common.hpp"
#include "ionxxz/config.hpp"
#include "ionxxz/couplings.hpp"
#include "ionxxz/csv.hpp"
#include "ionxxz/exponents.hpp"
#include "ionxxz/model_map.hpp"
#include "ionxxz/pipelines.hpp"
#include "ionxxz/rg_flow.hpp"
#include "ionxxz/spin_sim.hpp"
#include "ionxxz/trap.hpp"
#include "ionxxz/version.hpp"

using namespace ionxxz;

namespace {

Config load_config(const std::string& path, const std::vector<std::string>& allowed) {
    return path.empty() ? Config{} : Config::parse_file(path, allowed);
}

// Precedence: command-line flag, then config file, then built-in default.
void merge_number(Config& cfg, const CLI::Option* opt, const char* key, double value) {
    if (opt->count() > 0 || !cfg.has(key)) cfg.set_number(key, value);
}

void merge_text(Config& cfg, const CLI::Option* opt, const char* key, const std::string& value) {
    if (opt->count() > 0 || !cfg.has(key)) cfg.set_text(key, value);
}

// Flag-only override: no default is injected when absent.
void merge_optional(Config& cfg, const CLI::Option* opt, const char* key, double value) {
    if (opt->count() > 0) cfg.set_number(key, value);
}

IonChain chain_from_config(const Config& cfg) {
    const int n = static_cast<int>(cfg.integer("ions"));
    const std::string mode = cfg.text("chain");
    if (mode == "equidistant") return equidistant_chain(n, cfg.number("spacing"));
    if (mode != "real") throw error("cli", "chain must be 'real' or 'equidistant'");
    TrapSpec spec;
    spec.ion_count = n;
    return solve_equilibrium(spec);
}

ModelSpec model_from_config(const Config& cfg) {
    ModelSpec model;
    model.sites = static_cast<int>(cfg.integer("sites"));
    model.sigma = cfg.number("sigma");
    model.lambda = cfg.number("lambda");
    model.coupling = cfg.number("coupling");
    model.spin = cfg.number("spin");
    return model;
}

int run_trap_modes(const Config& cfg, const std::string& csv_path) {
    const IonChain chain = chain_from_config(cfg);
    const PhononSpectrum spectrum = longitudinal_modes(chain);
    const int n = static_cast<int>(chain.positions.size());

    std::printf("# %d-ion %s chain, force residual %.3g\n", n, cfg.text("chain").c_str(),
                chain.residual);
    std::printf("%-6s %s\n", "mode", "omega/omega_z");
    for (int l = 0; l < n; ++l) std::printf("%-6d %.17g\n", l, spectrum.frequencies[l]);

    if (!csv_path.empty()) {
        CsvTable table;
        table.schema = "modes";
        table.config_hash = cfg.hash();
        table.column("mode_index", "1");
        table.column("omega_over_omegaz", "1");
        for (int i = 0; i < n; ++i) table.column("f" + std::to_string(i), "1");
        for (int l = 0; l < n; ++l) {
            std::vector<std::string> cells{format_integer(l),
                                           format_number(spectrum.frequencies[l])};
            for (int i = 0; i < n; ++i) cells.push_back(format_number(spectrum.mode_matrix(i, l)));
            table.row(std::move(cells));
        }
        write_csv(csv_path, table);
        std::printf("wrote %s\n", csv_path.c_str());
    }
    return 0;
}

int run_couplings(const Config& cfg, bool show_matrix, const std::string& csv_path) {
    const IonChain chain = chain_from_config(cfg);
    const PhononSpectrum spectrum = longitudinal_modes(chain);
    BeamParams beam;
    beam.rabi = cfg.number("rabi");
    beam.detuning = cfg.number("detuning");
    beam.delta_k = cfg.number("delta_k");
    const CouplingMatrix cm = effective_couplings(chain, spectrum, beam);
    const PowerLawFit fit = fit_power_law(cm);
    const double delta_tilde = (1.0 - beam.detuning * beam.detuning) * std::pow(cm.r0, 3);

    std::printf("delta        %.17g\n", beam.detuning);
    std::printf("delta_tilde  %.17g\n", delta_tilde);
    std::printf("r0           %.17g\n", cm.r0);
    std::printf("sigma        %.17g\n", fit.exponent);
    std::printf("amplitude    %.17g\n", fit.amplitude);
    std::printf("residual     %.3g\n", fit.max_relative_residual);

    if (show_matrix) {
        std::printf("# J_ij (omega_z units)\n");
        for (int i = 0; i < cm.size; ++i) {
            for (int k = 0; k < cm.size; ++k)
                std::printf("%s%.10g", k ? " " : "", cm.values(i, k));
            std::printf("\n");
        }
    }
    if (!csv_path.empty()) {
        CsvTable table;
        table.schema = "couplings";
        table.config_hash = cfg.hash();
        table.column("delta_tilde", "1");
        table.column("distance", "R0");
        table.column("coupling_abs", "omega_z");
        table.column("fit", "omega_z");
        for (int i = 0; i < cm.size; ++i)
            for (int k = i + 1; k < cm.size; ++k)
                table.row({format_number(delta_tilde), format_number(cm.distances(i, k)),
                           format_number(std::abs(cm.values(i, k))),
                           format_number(fit.amplitude *
                                         std::pow(cm.distances(i, k), -fit.exponent))});
        write_csv(csv_path, table);
        std::printf("wrote %s\n", csv_path.c_str());
    }
    return 0;
}

int run_sigma_sweep(const Config& cfg, const std::string& which, const std::string& csv_path) {
    TrapSpec spec;
    spec.ion_count = static_cast<int>(cfg.integer("ions"));
    SweepOptions opt;
    opt.points = static_cast<int>(cfg.integer("points"));
    opt.spacing = cfg.number("spacing");
    opt.lambda = cfg.number("lambda");
    opt.interior_margin = static_cast<int>(cfg.integer("margin"));
    opt.frac_min = cfg.number("frac_min");
    opt.frac_max = cfg.number("frac_max");

    std::vector<ChainMode> modes;
    if (which == "both")
        modes = {ChainMode::real, ChainMode::equidistant};
    else if (which == "real")
        modes = {ChainMode::real};
    else if (which == "equidistant")
        modes = {ChainMode::equidistant};
    else
        throw error("cli", "chain must be 'both', 'real' or 'equidistant'");

    CsvTable table;
    table.schema = "sweep";
    table.config_hash = cfg.hash();
    table.column("delta", "omega_z");
    table.column("delta_tilde", "1");
    table.column("sigma", "1");
    table.column("residual", "1");
    table.column("beta_z", "1");
    table.column("d_prefactor", "1");
    table.column("chain_mode", "1");

    int failed = 0, ok = 0;
    for (ChainMode mode : modes) {
        const std::vector<DetuningPoint> points = detuning_sweep(spec, mode, {}, opt);
        double lo = 1e300, hi = -1e300;
        int bad = 0;
        bool monotone = true;
        double last_dt = -1e300, last_sigma = -1e300;
        for (auto it = points.rbegin(); it != points.rend(); ++it) { // ascending delta_tilde
            const DetuningPoint& pt = *it;
            if (!pt.ok) {
                ++bad;
                continue;
            }
            lo = std::min(lo, pt.sigma);
            hi = std::max(hi, pt.sigma);
            if (pt.delta_tilde > last_dt && pt.sigma < last_sigma - 1e-9) monotone = false;
            last_dt = pt.delta_tilde;
            last_sigma = pt.sigma;
        }
        for (const DetuningPoint& pt : points)
            if (pt.ok)
                table.row({format_number(pt.delta), format_number(pt.delta_tilde),
                           format_number(pt.sigma), format_number(pt.fit_residual),
                           format_number(pt.beta_z), format_number(pt.d_prefactor),
                           pt.chain_mode == ChainMode::real ? "real" : "equidistant"});
        failed += bad;
        ok += static_cast<int>(points.size()) - bad;
        std::printf("%-12s %3zu points, sigma %.4f .. %.4f, monotone %s, %d failed\n",
                    mode == ChainMode::real ? "real" : "equidistant", points.size(), lo, hi,
                    monotone ? "yes" : "no", bad);
    }
    if (!csv_path.empty()) {
        write_csv(csv_path, table);
        std::printf("wrote %s\n", csv_path.c_str());
    }
    if (ok == 0) throw error("sweep", "every grid point failed");
    return failed > 0 ? 2 : 0;
}

int run_exponents(const Config& cfg) {
    const double sigma = cfg.number("sigma");
    const double d = cfg.number("d");
    const double p = cfg.number("p");
    const ExponentSet es = exponent_set(sigma, d);
    const QuenchExponents q = quench_exponents(sigma, d, p);

    std::printf("%-10s %.17g\n", "sigma", es.sigma);
    std::printf("%-10s %.17g\n", "d", es.d);
    std::printf("%-10s %.17g\n", "phi", es.phi);
    std::printf("%-10s %.17g\n", "epsilon", es.epsilon);
    std::printf("%-10s %s\n", "regime",
                es.regime == CriticalRegime::interacting ? "interacting" : "mean_field");
    std::printf("%-10s %.17g\n", "beta_z", es.beta_z);
    std::printf("%-10s %.17g\n", "nu", es.nu);
    std::printf("%-10s %.17g\n", "z", es.z);
    std::printf("%-10s %.17g\n", "K_d", es.k_d);
    std::printf("%-10s %.17g  (p = %g)\n", "zeta", q.zeta, p);
    std::printf("%-10s %.17g\n", "kz_length", q.kz_length_exponent);
    if (d == 1.0) {
        const double dpref =
            prefactor_D(sigma, d, cfg.number("lambda"), cfg.number("spin"), cfg.number("coupling"));
        std::printf("%-10s %.17g\n", "D", dpref);
    }
    return 0;
}

int run_phase_diagram(const Config& cfg, const std::string& csv_path) {
    const long points = cfg.integer("points");
    if (points < 2) throw error("cli", "points must be at least 2");
    const double theta_max = std::atan(1.0 / std::sqrt(2.0));
    std::vector<double> thetas(points);
    for (long i = 0; i < points; ++i)
        thetas[i] = theta_max * static_cast<double>(i) / static_cast<double>(points - 1);
    const std::vector<PhaseBoundaryPoint> lobe =
        phase_boundary(thetas, cfg.number("coupling_sum"), cfg.number("spin"));

    std::printf("%-22s %-22s %s\n", "theta", "lambda", "omega_h_crit");
    for (const PhaseBoundaryPoint& pt : lobe)
        std::printf("%-22.10g %-22.10g %.10g\n", pt.theta, pt.lambda, pt.omega_h_crit);

    if (!csv_path.empty()) {
        CsvTable table;
        table.schema = "phase_boundary";
        table.config_hash = cfg.hash();
        table.column("theta", "rad");
        table.column("lambda", "1");
        table.column("omega_h_crit", "coupling_sum");
        for (const PhaseBoundaryPoint& pt : lobe)
            table.row({format_number(pt.theta), format_number(pt.lambda),
                       format_number(pt.omega_h_crit)});
        write_csv(csv_path, table);
        std::printf("wrote %s\n", csv_path.c_str());
    }
    return 0;
}

int run_rg_flow(const Config& cfg, const std::string& csv_path) {
    const ExponentSet es = exponent_set(cfg.number("sigma"), cfg.number("d"));
    RGState start;
    start.g_tilde = cfg.number("g0");
    start.mu_tilde = cfg.number("mu0");
    const RGTrajectory traj =
        integrate_flow(start, es.epsilon, es.phi, es.k_d, cfg.number("b_min"));

    const RGState& last = traj.states.back();
    const char* how = traj.termination == FlowTermination::converged    ? "converged"
                      : traj.termination == FlowTermination::diverged   ? "diverged"
                                                                        : "reached b_min";
    std::printf("eps %.10g, phi %.10g, K_d %.10g\n", es.epsilon, es.phi, es.k_d);
    std::printf("flow %s after %zu steps at b = %.10g\n", how, traj.states.size() - 1, last.b);
    std::printf("g_tilde  %.17g\nmu_tilde %.17g\n", last.g_tilde, last.mu_tilde);
    for (const FixedPoint& fp : find_fixed_points(es.epsilon, es.k_d))
        std::printf("fixed point g* = %.17g (%s)\n", fp.g_star,
                    fp.stability == Stability::infrared_stable ? "infrared-stable"
                                                               : "infrared-unstable");

    if (!csv_path.empty()) {
        CsvTable table;
        table.schema = "rg_trajectories";
        table.config_hash = cfg.hash();
        table.column("trajectory", "1");
        table.column("b", "1");
        table.column("g_tilde", "1");
        table.column("mu_tilde", "1");
        for (const RGState& st : traj.states)
            table.row({"0", format_number(st.b), format_number(st.g_tilde),
                       format_number(st.mu_tilde)});
        write_csv(csv_path, table);
        std::printf("wrote %s\n", csv_path.c_str());
    }
    return 0;
}

int run_ed_scan(const Config& cfg, const std::string& csv_path) {
    const ModelSpec model = model_from_config(cfg);
    const CriticalFieldEstimate hc = finite_size_critical_field(model);
    const double h_max =
        cfg.has("field_max") ? cfg.number("field_max") : 1.25 * hc.one_magnon;
    const long npts = cfg.integer("field_points");
    if (npts < 2) throw error("cli", "field_points must be at least 2");
    std::vector<double> fields(npts);
    for (long i = 0; i < npts; ++i)
        fields[i] = h_max * static_cast<double>(i) / static_cast<double>(npts - 1);

    const GroundStateScan scan = ground_state_scan(model, fields);

    std::printf("one-magnon h_c   %.17g\n", hc.one_magnon);
    std::printf("thermodynamic    %.17g\n", hc.thermodynamic);
    std::printf("sectors:\n");
    for (const SectorInfo& s : scan.sectors)
        std::printf("  ups %2d  m_z %5.1f  dim %6zu  e_J %.12g%s\n", s.up_count, s.magnetization,
                    s.dimension, s.ground_energy, s.iterative ? "  (lanczos)" : "");
    std::printf("crossings:\n");
    for (const SectorCrossing& c : scan.crossings)
        std::printf("  h = %.17g  (ups %d -> %d)\n", c.field, c.sector_low, c.sector_high);

    if (!csv_path.empty()) {
        CsvTable table;
        table.schema = "ed_scan";
        table.config_hash = cfg.hash();
        table.column("h", "J0");
        table.column("m_z", "1");
        table.column("ground_sector", "1");
        for (const MagnetizationStep& row : scan.rows)
            table.row({format_number(row.field), format_number(row.m_z),
                       format_integer(row.ground_sector)});
        write_csv(csv_path, table);
        std::printf("wrote %s\n", csv_path.c_str());
    }
    return 0;
}

int run_quench(const Config& cfg) {
    const ModelSpec model = model_from_config(cfg);
    const CriticalFieldEstimate hc = finite_size_critical_field(model);
    QuenchProtocol protocol;
    protocol.h_start = cfg.has("h_start") ? cfg.number("h_start") : 1.5 * hc.one_magnon;
    protocol.h_final = cfg.number("h_final");
    protocol.rate = cfg.number("rate");
    protocol.power = cfg.number("power");
    protocol.seed_field = cfg.number("seed");
    protocol.tolerance = cfg.number("tolerance");

    const QuenchResult result = quench_evolve(model, protocol);

    std::printf("critical field (one-magnon)  %.17g\n", result.critical_field);
    std::printf("ramp h %.10g -> %.10g at rate %.10g, duration %.10g\n", protocol.h_start,
                protocol.h_final, protocol.rate, result.duration);
    std::printf("steps accepted %ld, rejected %ld\n", result.accepted_steps,
                result.rejected_steps);
    std::printf("norm drift                   %.3g\n", result.norm_drift);
    std::printf("defect density               %.17g\n", result.defect_density);
    std::printf("fidelity vs initial          %.17g\n", result.fidelity_vs_initial);
    std::printf("fidelity vs final ground     %.17g\n", result.fidelity_vs_final_ground);
    return 0;
}

int run_reproduce(const Config& cfg, const std::string& kind, const std::string& outdir) {
    const DataProduct product = make_product(kind, cfg, outdir);
    std::printf("%s\n", product.summary.c_str());
    for (const std::string& f : product.files) std::printf("wrote %s\n", f.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"long-range XXZ simulator for linear ion chains"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string);

    int code = 0;

    // trap-modes
    auto* tm = app.add_subcommand("trap-modes", "equilibrium chain and longitudinal modes");
    std::string tm_config, tm_chain = "real", tm_csv;
    long tm_n = 10;
    double tm_spacing = 2.5;
    auto* tm_n_opt = tm->add_option("--n,--ions", tm_n, "ion count");
    auto* tm_chain_opt = tm->add_option("--chain", tm_chain, "real | equidistant");
    auto* tm_spacing_opt = tm->add_option("--spacing", tm_spacing, "equidistant spacing (l units)");
    tm->add_option("--config", tm_config, "config file")->check(CLI::ExistingFile);
    tm->add_option("--csv", tm_csv, "write the mode table here");
    tm->callback([&] {
        Config cfg = load_config(tm_config, {"ions", "chain", "spacing"});
        merge_number(cfg, tm_n_opt, "ions", static_cast<double>(tm_n));
        merge_text(cfg, tm_chain_opt, "chain", tm_chain);
        merge_number(cfg, tm_spacing_opt, "spacing", tm_spacing);
        code = run_trap_modes(cfg, tm_csv);
    });

    // couplings
    auto* cp = app.add_subcommand("couplings", "effective spin couplings at one detuning");
    std::string cp_config, cp_chain = "real", cp_csv;
    long cp_n = 10;
    double cp_spacing = 2.5, cp_detuning = 0.5, cp_rabi = 1.0, cp_dk = 1.0;
    bool cp_matrix = false;
    auto* cp_n_opt = cp->add_option("--n,--ions", cp_n, "ion count");
    auto* cp_chain_opt = cp->add_option("--chain", cp_chain, "real | equidistant");
    auto* cp_spacing_opt = cp->add_option("--spacing", cp_spacing, "equidistant spacing");
    auto* cp_det_opt = cp->add_option("--detuning", cp_detuning, "Delta in omega_z units");
    auto* cp_rabi_opt = cp->add_option("--rabi", cp_rabi, "Omega");
    auto* cp_dk_opt = cp->add_option("--delta-k", cp_dk, "beat-note wavevector");
    cp->add_flag("--matrix", cp_matrix, "print the full coupling matrix");
    cp->add_option("--config", cp_config, "config file")->check(CLI::ExistingFile);
    cp->add_option("--csv", cp_csv, "write pair couplings here");
    cp->callback([&] {
        Config cfg = load_config(cp_config,
                                 {"ions", "chain", "spacing", "detuning", "rabi", "delta_k"});
        merge_number(cfg, cp_n_opt, "ions", static_cast<double>(cp_n));
        merge_text(cfg, cp_chain_opt, "chain", cp_chain);
        merge_number(cfg, cp_spacing_opt, "spacing", cp_spacing);
        merge_number(cfg, cp_det_opt, "detuning", cp_detuning);
        merge_number(cfg, cp_rabi_opt, "rabi", cp_rabi);
        merge_number(cfg, cp_dk_opt, "delta_k", cp_dk);
        code = run_couplings(cfg, cp_matrix, cp_csv);
    });

    // sigma-sweep
    auto* sw = app.add_subcommand("sigma-sweep", "interaction range across the detuning grid");
    std::string sw_config, sw_chain = "both", sw_csv;
    long sw_n = 10, sw_points = 200, sw_margin = 1;
    double sw_spacing = 2.5, sw_lambda = 0.5, sw_fmin = 1e-3, sw_fmax = 0.9999;
    auto* sw_n_opt = sw->add_option("--n,--ions", sw_n, "ion count");
    sw->add_option("--chain", sw_chain, "both | real | equidistant");
    auto* sw_points_opt = sw->add_option("--points", sw_points, "grid points");
    auto* sw_spacing_opt = sw->add_option("--spacing", sw_spacing, "equidistant spacing");
    auto* sw_lambda_opt = sw->add_option("--lambda", sw_lambda, "anisotropy for D");
    auto* sw_margin_opt = sw->add_option("--margin", sw_margin, "edge ions dropped (real chain)");
    auto* sw_fmin_opt = sw->add_option("--frac-min", sw_fmin, "low end of the delta_tilde grid");
    auto* sw_fmax_opt = sw->add_option("--frac-max", sw_fmax, "high end of the delta_tilde grid");
    sw->add_option("--config", sw_config, "config file")->check(CLI::ExistingFile);
    sw->add_option("--csv", sw_csv, "write the sweep table here");
    sw->callback([&] {
        Config cfg = load_config(sw_config, {"ions", "chain", "spacing", "points", "margin",
                                             "lambda", "frac_min", "frac_max"});
        merge_number(cfg, sw_n_opt, "ions", static_cast<double>(sw_n));
        merge_number(cfg, sw_points_opt, "points", static_cast<double>(sw_points));
        merge_number(cfg, sw_spacing_opt, "spacing", sw_spacing);
        merge_number(cfg, sw_lambda_opt, "lambda", sw_lambda);
        merge_number(cfg, sw_margin_opt, "margin", static_cast<double>(sw_margin));
        merge_number(cfg, sw_fmin_opt, "frac_min", sw_fmin);
        merge_number(cfg, sw_fmax_opt, "frac_max", sw_fmax);
        code = run_sigma_sweep(cfg, sw_chain, sw_csv);
    });

    // exponents
    auto* ex = app.add_subcommand("exponents", "critical exponents for (sigma, d)");
    std::string ex_config;
    double ex_sigma = 2.3, ex_d = 1.0, ex_p = 1.0, ex_lambda = 0.5, ex_spin = 0.5,
           ex_coupling = 1.0;
    auto* ex_sigma_opt = ex->add_option("--sigma", ex_sigma, "interaction range");
    auto* ex_d_opt = ex->add_option("--d", ex_d, "dimension");
    auto* ex_p_opt = ex->add_option("--p", ex_p, "ramp power for the quench exponents");
    auto* ex_lambda_opt = ex->add_option("--lambda", ex_lambda, "anisotropy for D");
    auto* ex_spin_opt = ex->add_option("--spin", ex_spin, "spin length");
    auto* ex_coupling_opt = ex->add_option("--coupling", ex_coupling, "J0");
    ex->add_option("--config", ex_config, "config file")->check(CLI::ExistingFile);
    ex->callback([&] {
        Config cfg = load_config(ex_config, {"sigma", "d", "p", "lambda", "spin", "coupling"});
        merge_number(cfg, ex_sigma_opt, "sigma", ex_sigma);
        merge_number(cfg, ex_d_opt, "d", ex_d);
        merge_number(cfg, ex_p_opt, "p", ex_p);
        merge_number(cfg, ex_lambda_opt, "lambda", ex_lambda);
        merge_number(cfg, ex_spin_opt, "spin", ex_spin);
        merge_number(cfg, ex_coupling_opt, "coupling", ex_coupling);
        code = run_exponents(cfg);
    });

    // phase-diagram
    auto* pd = app.add_subcommand("phase-diagram", "mean-field lobe in the (theta, Omega_h) plane");
    std::string pd_config, pd_csv;
    long pd_points = 41;
    double pd_sum = 1.0, pd_spin = 0.5;
    auto* pd_points_opt = pd->add_option("--points", pd_points, "theta samples");
    auto* pd_sum_opt = pd->add_option("--coupling-sum", pd_sum, "sum_j J_ij at the chain center");
    auto* pd_spin_opt = pd->add_option("--spin", pd_spin, "spin length");
    pd->add_option("--config", pd_config, "config file")->check(CLI::ExistingFile);
    pd->add_option("--csv", pd_csv, "write the boundary here");
    pd->callback([&] {
        Config cfg = load_config(pd_config, {"points", "coupling_sum", "spin"});
        merge_number(cfg, pd_points_opt, "points", static_cast<double>(pd_points));
        merge_number(cfg, pd_sum_opt, "coupling_sum", pd_sum);
        merge_number(cfg, pd_spin_opt, "spin", pd_spin);
        code = run_phase_diagram(cfg, pd_csv);
    });

    // rg-flow
    auto* rg = app.add_subcommand("rg-flow", "integrate one infrared flow trajectory");
    std::string rg_config, rg_csv;
    double rg_sigma = 2.3, rg_d = 1.0, rg_g0 = 0.2, rg_mu0 = 1e-3, rg_bmin = -10.0;
    auto* rg_sigma_opt = rg->add_option("--sigma", rg_sigma, "interaction range");
    auto* rg_d_opt = rg->add_option("--d", rg_d, "dimension");
    auto* rg_g0_opt = rg->add_option("--g0", rg_g0, "initial coupling");
    auto* rg_mu0_opt = rg->add_option("--mu0", rg_mu0, "initial chemical potential");
    auto* rg_bmin_opt = rg->add_option("--b-min", rg_bmin, "infrared cutoff scale");
    rg->add_option("--config", rg_config, "config file")->check(CLI::ExistingFile);
    rg->add_option("--csv", rg_csv, "write the trajectory here");
    rg->callback([&] {
        Config cfg = load_config(rg_config, {"sigma", "d", "g0", "mu0", "b_min"});
        merge_number(cfg, rg_sigma_opt, "sigma", rg_sigma);
        merge_number(cfg, rg_d_opt, "d", rg_d);
        merge_number(cfg, rg_g0_opt, "g0", rg_g0);
        merge_number(cfg, rg_mu0_opt, "mu0", rg_mu0);
        merge_number(cfg, rg_bmin_opt, "b_min", rg_bmin);
        code = run_rg_flow(cfg, rg_csv);
    });

    // ed-scan
    auto* ed = app.add_subcommand("ed-scan", "sector-resolved ground state vs field");
    std::string ed_config, ed_csv;
    long ed_sites = 8, ed_points = 121;
    double ed_sigma = 2.3, ed_lambda = 0.0, ed_coupling = 1.0, ed_spin = 0.5, ed_hmax = 0.0;
    auto* ed_sites_opt = ed->add_option("--sites", ed_sites, "chain length");
    auto* ed_sigma_opt = ed->add_option("--sigma", ed_sigma, "interaction range");
    auto* ed_lambda_opt = ed->add_option("--lambda", ed_lambda, "anisotropy");
    auto* ed_coupling_opt = ed->add_option("--coupling", ed_coupling, "J0");
    auto* ed_spin_opt = ed->add_option("--spin", ed_spin, "spin length");
    auto* ed_hmax_opt = ed->add_option("--field-max", ed_hmax, "scan ceiling (default 1.25 h_c)");
    auto* ed_points_opt = ed->add_option("--field-points", ed_points, "scan resolution");
    ed->add_option("--config", ed_config, "config file")->check(CLI::ExistingFile);
    ed->add_option("--csv", ed_csv, "write the staircase here");
    ed->callback([&] {
        Config cfg = load_config(ed_config, {"sites", "sigma", "lambda", "coupling", "spin",
                                             "field_max", "field_points"});
        merge_number(cfg, ed_sites_opt, "sites", static_cast<double>(ed_sites));
        merge_number(cfg, ed_sigma_opt, "sigma", ed_sigma);
        merge_number(cfg, ed_lambda_opt, "lambda", ed_lambda);
        merge_number(cfg, ed_coupling_opt, "coupling", ed_coupling);
        merge_number(cfg, ed_spin_opt, "spin", ed_spin);
        merge_optional(cfg, ed_hmax_opt, "field_max", ed_hmax);
        merge_number(cfg, ed_points_opt, "field_points", static_cast<double>(ed_points));
        code = run_ed_scan(cfg, ed_csv);
    });

    // quench
    auto* qu = app.add_subcommand("quench", "ramp through the transition and measure defects");
    std::string qu_config;
    long qu_sites = 8;
    double qu_sigma = 2.3, qu_lambda = 0.5, qu_coupling = 1.0, qu_spin = 0.5;
    double qu_rate = 0.01, qu_power = 1.0, qu_hstart = 0.0, qu_hfinal = 0.0, qu_seed = 0.05,
           qu_tol = 1e-6;
    auto* qu_sites_opt = qu->add_option("--sites", qu_sites, "chain length (max 14)");
    auto* qu_sigma_opt = qu->add_option("--sigma", qu_sigma, "interaction range");
    auto* qu_lambda_opt = qu->add_option("--lambda", qu_lambda, "anisotropy");
    auto* qu_coupling_opt = qu->add_option("--coupling", qu_coupling, "J0");
    auto* qu_spin_opt = qu->add_option("--spin", qu_spin, "spin length");
    auto* qu_rate_opt = qu->add_option("--rate", qu_rate, "ramp rate");
    auto* qu_power_opt = qu->add_option("--power", qu_power, "schedule power");
    auto* qu_hstart_opt = qu->add_option("--h-start", qu_hstart, "start field (default 1.5 h_c)");
    auto* qu_hfinal_opt = qu->add_option("--h-final", qu_hfinal, "final field");
    auto* qu_seed_opt = qu->add_option("--seed", qu_seed, "transverse seed (J0 units)");
    auto* qu_tol_opt = qu->add_option("--tolerance", qu_tol, "propagator error per unit time");
    qu->add_option("--config", qu_config, "config file")->check(CLI::ExistingFile);
    qu->callback([&] {
        Config cfg = load_config(qu_config, {"sites", "sigma", "lambda", "coupling", "spin",
                                             "rate", "power", "h_start", "h_final", "seed",
                                             "tolerance"});
        merge_number(cfg, qu_sites_opt, "sites", static_cast<double>(qu_sites));
        merge_number(cfg, qu_sigma_opt, "sigma", qu_sigma);
        merge_number(cfg, qu_lambda_opt, "lambda", qu_lambda);
        merge_number(cfg, qu_coupling_opt, "coupling", qu_coupling);
        merge_number(cfg, qu_spin_opt, "spin", qu_spin);
        merge_number(cfg, qu_rate_opt, "rate", qu_rate);
        merge_number(cfg, qu_power_opt, "power", qu_power);
        merge_optional(cfg, qu_hstart_opt, "h_start", qu_hstart);
        merge_number(cfg, qu_hfinal_opt, "h_final", qu_hfinal);
        merge_number(cfg, qu_seed_opt, "seed", qu_seed);
        merge_number(cfg, qu_tol_opt, "tolerance", qu_tol);
        code = run_quench(cfg);
    });

    // reproduce
    auto* rp = app.add_subcommand("reproduce", "render a figure-backing data product");
    std::string rp_kind, rp_config, rp_outdir;
    rp->add_option("kind", rp_kind, "product kind")->required();
    rp->add_option("--config", rp_config, "config file")->check(CLI::ExistingFile);
    rp->add_option("--outdir", rp_outdir, "output directory");
    rp->callback([&] {
        Config cfg = load_config(
            rp_config, {"ions", "chain", "spacing", "points", "margin", "lambda", "sigma", "d",
                        "sites", "coupling", "spin", "field_max", "field_points", "rates",
                        "rate_min", "rate_max", "h_start", "h_final", "seed", "tolerance",
                        "power", "g_max", "mu_max", "resolution", "b_min", "outdir"});
        code = run_reproduce(cfg, rp_kind, rp_outdir);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ionxxz::error& e) {
        nlohmann::json j{{"error", {{"category", e.category()}, {"message", e.what()}}}};
        std::cerr << j.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json j{{"error", {{"category", "internal"}, {"message", e.what()}}}};
        std::cerr << j.dump() << '\n';
        return 1;
    }
    return code;
}
