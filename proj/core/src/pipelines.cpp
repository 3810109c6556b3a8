#include "ionxxz/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "ionxxz/common.hpp"
#include "ionxxz/couplings.hpp"
#include "ionxxz/csv.hpp"
#include "ionxxz/exponents.hpp"
#include "ionxxz/rg_flow.hpp"
#include "ionxxz/spin_sim.hpp"
#include "ionxxz/svg.hpp"
#include "ionxxz/trap.hpp"

namespace ionxxz {

namespace {

const char* const palette[] = {"#1f6fb2", "#d1452c", "#2e8540",
                               "#7a52a1", "#b8860b", "#377b7f"};

std::string resolve_outdir(const Config& cfg, std::string outdir) {
    if (outdir.empty()) outdir = cfg.text_or("outdir", "");
    if (outdir.empty()) {
        const char* env = std::getenv("IONXXZ_OUTDIR");
        if (env && *env) outdir = env;
    }
    if (outdir.empty()) outdir = "out";
    std::filesystem::create_directories(outdir);
    return outdir;
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::string brief(const char* fmt, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), fmt, a, b);
    return buf;
}

IonChain chain_from(const Config& cfg, int n, const std::string& default_mode) {
    const std::string mode = cfg.text_or("chain", default_mode);
    if (mode == "equidistant") return equidistant_chain(n, cfg.number_or("spacing", 2.5));
    if (mode != "real") throw error("product", "chain must be 'real' or 'equidistant'");
    TrapSpec spec;
    spec.ion_count = n;
    return solve_equilibrium(spec);
}

ModelSpec model_from(const Config& cfg, double default_lambda) {
    ModelSpec model;
    model.sites = static_cast<int>(cfg.integer_or("sites", 8));
    model.sigma = cfg.number_or("sigma", 2.3);
    model.lambda = cfg.number_or("lambda", default_lambda);
    model.coupling = cfg.number_or("coupling", 1.0);
    model.spin = cfg.number_or("spin", 0.5);
    return model;
}

const char* mode_name(ChainMode mode) {
    return mode == ChainMode::real ? "real" : "equidistant";
}

// ---- modes ----

DataProduct product_modes(const Config& cfg, const std::string& dir) {
    const int n = static_cast<int>(cfg.integer_or("ions", 10));
    const IonChain chain = chain_from(cfg, n, "real");
    const PhononSpectrum spectrum = longitudinal_modes(chain);

    CsvTable table;
    table.schema = "modes";
    table.config_hash = cfg.hash();
    table.column("mode_index", "1");
    table.column("omega_over_omegaz", "1");
    for (int i = 0; i < n; ++i) table.column("f" + std::to_string(i), "1");
    for (int l = 0; l < n; ++l) {
        std::vector<std::string> cells{format_integer(l), format_number(spectrum.frequencies[l])};
        for (int i = 0; i < n; ++i) cells.push_back(format_number(spectrum.mode_matrix(i, l)));
        table.row(std::move(cells));
    }

    SvgPlot plot;
    plot.caption = "modes: longitudinal spectrum, N = " + std::to_string(n);
    plot.x_label = "mode index";
    plot.y_label = "omega / omega_z";
    SvgSeries s;
    s.label = cfg.text_or("chain", "real");
    s.markers = true;
    for (int l = 0; l < n; ++l) {
        s.x.push_back(l);
        s.y.push_back(spectrum.frequencies[l]);
    }
    plot.series.push_back(std::move(s));

    DataProduct product;
    product.kind = "modes";
    product.files = {join(dir, "modes.csv"), join(dir, "modes.svg")};
    write_csv(product.files[0], table);
    write_svg(product.files[1], plot);
    product.summary = brief("modes: %g ions, top frequency %.6g omega_z", n,
                            spectrum.frequencies[n - 1]);
    return product;
}

// ---- fig1a: coupling magnitude vs distance at a few detunings ----

DataProduct product_fig1a(const Config& cfg, const std::string& dir) {
    const int n = static_cast<int>(cfg.integer_or("ions", 10));
    const IonChain chain = chain_from(cfg, n, "equidistant");
    const PhononSpectrum spectrum = longitudinal_modes(chain);
    const double fracs[] = {0.02, 0.30, 0.95};

    CsvTable table;
    table.schema = "couplings";
    table.config_hash = cfg.hash();
    table.column("delta_tilde", "1");
    table.column("distance", "R0");
    table.column("coupling_abs", "omega_z");
    table.column("fit", "omega_z");

    SvgPlot plot;
    plot.caption = "fig1a: pair couplings and power-law fits";
    plot.x_label = "r / R0";
    plot.y_label = "|J(r)|";
    plot.log_x = true;
    plot.log_y = true;

    int color = 0;
    for (double frac : fracs) {
        BeamParams beam;
        beam.detuning = std::sqrt(1.0 - frac);
        const CouplingMatrix cm = effective_couplings(chain, spectrum, beam);
        const PowerLawFit fit = fit_power_law(cm);
        const double delta_tilde = frac * std::pow(cm.r0, 3);

        std::vector<std::pair<double, double>> pairs;
        for (int i = 0; i < cm.size; ++i)
            for (int k = i + 1; k < cm.size; ++k)
                pairs.push_back({cm.distances(i, k), std::abs(cm.values(i, k))});
        std::sort(pairs.begin(), pairs.end());

        SvgSeries dots;
        dots.color = palette[color % 6];
        dots.markers = true;
        dots.line = false;
        dots.label = brief("dt=%.3g, sigma=%.3f", delta_tilde, fit.exponent);
        for (const auto& [r, j] : pairs) {
            table.row({format_number(delta_tilde), format_number(r), format_number(j),
                       format_number(fit.amplitude * std::pow(r, -fit.exponent))});
            dots.x.push_back(r);
            dots.y.push_back(j);
        }
        SvgSeries line;
        line.color = dots.color;
        for (double r : {pairs.front().first, pairs.back().first}) {
            line.x.push_back(r);
            line.y.push_back(fit.amplitude * std::pow(r, -fit.exponent));
        }
        plot.series.push_back(std::move(line));
        plot.series.push_back(std::move(dots));
        ++color;
    }

    DataProduct product;
    product.kind = "fig1a";
    product.files = {join(dir, "fig1a.csv"), join(dir, "fig1a.svg")};
    write_csv(product.files[0], table);
    write_svg(product.files[1], plot);
    product.summary = brief("fig1a: %g detunings, %g ions", 3, n);
    return product;
}

// ---- fig1b and its inset: the sigma(delta_tilde) sweep ----

SweepOptions sweep_options_from(const Config& cfg) {
    SweepOptions opt;
    opt.points = static_cast<int>(cfg.integer_or("points", 120));
    opt.spacing = cfg.number_or("spacing", 2.5);
    opt.lambda = cfg.number_or("lambda", 0.5);
    opt.interior_margin = static_cast<int>(cfg.integer_or("margin", 1));
    return opt;
}

DataProduct product_fig1b(const Config& cfg, const std::string& dir, bool inset) {
    TrapSpec spec;
    spec.ion_count = static_cast<int>(cfg.integer_or("ions", 10));
    const SweepOptions opt = sweep_options_from(cfg);

    CsvTable table;
    table.config_hash = cfg.hash();
    if (inset) {
        table.schema = "sweep_inset";
        table.column("delta_tilde", "1");
        table.column("beta_z", "1");
        table.column("chain_mode", "1");
    } else {
        table.schema = "sweep";
        table.column("delta", "omega_z");
        table.column("delta_tilde", "1");
        table.column("sigma", "1");
        table.column("residual", "1");
        table.column("beta_z", "1");
        table.column("d_prefactor", "1");
        table.column("chain_mode", "1");
    }

    SvgPlot plot;
    plot.caption = inset ? "fig1b_inset: order-parameter exponent vs detuning"
                         : "fig1b: interaction range vs detuning";
    plot.x_label = "delta_tilde";
    plot.y_label = inset ? "beta_z" : "sigma";
    plot.log_x = true;

    int skipped = 0;
    int color = 0;
    for (ChainMode mode : {ChainMode::real, ChainMode::equidistant}) {
        const std::vector<DetuningPoint> points = detuning_sweep(spec, mode, {}, opt);
        SvgSeries series;
        series.label = mode_name(mode);
        series.color = palette[color++ % 6];
        for (const DetuningPoint& pt : points) {
            if (!pt.ok) {
                ++skipped;
                continue;
            }
            if (inset) {
                table.row({format_number(pt.delta_tilde), format_number(pt.beta_z),
                           mode_name(pt.chain_mode)});
                if (std::isfinite(pt.beta_z)) {
                    series.x.push_back(pt.delta_tilde);
                    series.y.push_back(pt.beta_z);
                }
            } else {
                table.row({format_number(pt.delta), format_number(pt.delta_tilde),
                           format_number(pt.sigma), format_number(pt.fit_residual),
                           format_number(pt.beta_z), format_number(pt.d_prefactor),
                           mode_name(pt.chain_mode)});
                series.x.push_back(pt.delta_tilde);
                series.y.push_back(pt.sigma);
            }
        }
        plot.series.push_back(std::move(series));
    }

    DataProduct product;
    product.kind = inset ? "fig1b_inset" : "fig1b";
    product.files = {join(dir, product.kind + ".csv"), join(dir, product.kind + ".svg")};
    write_csv(product.files[0], table);
    write_svg(product.files[1], plot);
    product.summary = product.kind + ": " + std::to_string(opt.points) +
                      " grid points per variant, " + std::to_string(skipped) + " skipped";
    return product;
}

// ---- fig2: quench exponents along the sweep ----

DataProduct product_fig2(const Config& cfg, const std::string& dir) {
    TrapSpec spec;
    spec.ion_count = static_cast<int>(cfg.integer_or("ions", 10));
    const SweepOptions opt = sweep_options_from(cfg);
    const double power = cfg.number_or("power", 1.0);

    CsvTable table;
    table.schema = "quench_exponents";
    table.config_hash = cfg.hash();
    table.column("delta_tilde", "1");
    table.column("sigma", "1");
    table.column("zeta", "1");
    table.column("kz_length_exponent", "1");

    SvgPlot plot;
    plot.caption = "fig2: defect and length scaling vs detuning";
    plot.x_label = "delta_tilde";
    plot.y_label = "exponent";
    plot.log_x = true;
    SvgSeries zser, lser;
    zser.label = "zeta";
    zser.color = palette[0];
    lser.label = "kz_length";
    lser.color = palette[1];

    int skipped = 0;
    const std::vector<DetuningPoint> points =
        detuning_sweep(spec, ChainMode::equidistant, {}, opt);
    for (const DetuningPoint& pt : points) {
        if (!pt.ok || pt.sigma <= opt.dimension) {
            ++skipped;
            continue;
        }
        const QuenchExponents q = quench_exponents(pt.sigma, opt.dimension, power);
        table.row({format_number(pt.delta_tilde), format_number(pt.sigma),
                   format_number(q.zeta), format_number(q.kz_length_exponent)});
        zser.x.push_back(pt.delta_tilde);
        zser.y.push_back(q.zeta);
        lser.x.push_back(pt.delta_tilde);
        lser.y.push_back(q.kz_length_exponent);
    }
    plot.series.push_back(std::move(zser));
    plot.series.push_back(std::move(lser));

    DataProduct product;
    product.kind = "fig2";
    product.files = {join(dir, "fig2.csv"), join(dir, "fig2.svg")};
    write_csv(product.files[0], table);
    write_svg(product.files[1], plot);
    product.summary = "fig2: " + std::to_string(table.rows.size()) + " points, " +
                      std::to_string(skipped) + " outside sigma > d";
    return product;
}

// ---- fig3a / fig3b: flow portraits ----

DataProduct product_rg(const std::string& kind, const Config& cfg, const std::string& dir,
                       double default_sigma) {
    const double d = cfg.number_or("d", 1.0);
    const ExponentSet es = exponent_set(cfg.number_or("sigma", default_sigma), d);
    const double g_max =
        cfg.number_or("g_max", es.epsilon > 0.0 ? 2.0 * es.epsilon * es.k_d : 1.5);
    const double mu_max = cfg.number_or("mu_max", 1.0);
    const int resolution = static_cast<int>(cfg.integer_or("resolution", 12));
    const double b_min = cfg.number_or("b_min", -8.0);

    const FlowField field = flow_field_grid(es.epsilon, es.phi, es.k_d, g_max, mu_max,
                                            resolution, b_min);

    CsvTable grid;
    grid.schema = "rg_field";
    grid.config_hash = cfg.hash();
    grid.column("g", "1");
    grid.column("mu", "1");
    grid.column("dg_ir", "1");
    grid.column("dmu_ir", "1");
    for (const FlowArrow& a : field.arrows)
        grid.row({format_number(a.g), format_number(a.mu), format_number(a.dg_ir),
                  format_number(a.dmu_ir)});

    CsvTable traj;
    traj.schema = "rg_trajectories";
    traj.config_hash = cfg.hash();
    traj.column("trajectory", "1");
    traj.column("b", "1");
    traj.column("g_tilde", "1");
    traj.column("mu_tilde", "1");
    for (std::size_t t = 0; t < field.trajectories.size(); ++t)
        for (const RGState& st : field.trajectories[t].states)
            traj.row({format_integer(static_cast<long>(t)), format_number(st.b),
                      format_number(st.g_tilde), format_number(st.mu_tilde)});

    SvgPlot plot;
    plot.caption = kind + ": infrared flow, eps = " + format_number(es.epsilon);
    plot.x_label = "g_tilde";
    plot.y_label = "mu_tilde";
    for (const FlowArrow& a : field.arrows)
        plot.arrows.push_back({a.g, a.mu, a.dg_ir, a.dmu_ir});
    int color = 0;
    for (const RGTrajectory& t : field.trajectories) {
        SvgSeries s;
        s.color = palette[color++ % 6];
        for (const RGState& st : t.states) {
            if (st.g_tilde > 1.02 * g_max || st.mu_tilde > 1.02 * mu_max) break;
            s.x.push_back(st.g_tilde);
            s.y.push_back(st.mu_tilde);
        }
        plot.series.push_back(std::move(s));
    }
    SvgSeries fixed;
    fixed.label = "fixed points";
    fixed.color = "#000000";
    fixed.line = false;
    fixed.markers = true;
    for (const FixedPoint& fp : find_fixed_points(es.epsilon, es.k_d)) {
        fixed.x.push_back(fp.g_star);
        fixed.y.push_back(0.0);
    }
    plot.series.push_back(std::move(fixed));

    DataProduct product;
    product.kind = kind;
    product.files = {join(dir, kind + "_field.csv"), join(dir, kind + "_trajectories.csv"),
                     join(dir, kind + ".svg")};
    write_csv(product.files[0], grid);
    write_csv(product.files[1], traj);
    write_svg(product.files[2], plot);
    product.summary = kind + ": eps = " + format_number(es.epsilon) + ", " +
                      std::to_string(field.trajectories.size()) + " trajectories";
    return product;
}

// ---- magnetization staircase ----

DataProduct product_magnetization(const Config& cfg, const std::string& dir) {
    const ModelSpec model = model_from(cfg, 0.0);
    const CriticalFieldEstimate hc = finite_size_critical_field(model);
    const double h_max = cfg.number_or("field_max", 1.25 * hc.one_magnon);
    const long npts = cfg.integer_or("field_points", 121);
    if (npts < 2) throw error("product", "field_points must be at least 2");
    std::vector<double> fields(npts);
    for (long i = 0; i < npts; ++i)
        fields[i] = h_max * static_cast<double>(i) / static_cast<double>(npts - 1);

    const GroundStateScan scan = ground_state_scan(model, fields);

    CsvTable table;
    table.schema = "ed_scan";
    table.config_hash = cfg.hash();
    table.column("h", "J0");
    table.column("m_z", "1");
    table.column("ground_sector", "1");
    for (const MagnetizationStep& row : scan.rows)
        table.row({format_number(row.field), format_number(row.m_z),
                   format_integer(row.ground_sector)});

    SvgPlot plot;
    plot.caption = "magnetization: ground-state staircase, N = " + std::to_string(model.sites);
    plot.x_label = "h / J0";
    plot.y_label = "m_z";
    SvgSeries s;
    s.markers = true;
    for (const MagnetizationStep& row : scan.rows) {
        s.x.push_back(row.field);
        s.y.push_back(row.m_z);
    }
    plot.series.push_back(std::move(s));

    DataProduct product;
    product.kind = "magnetization";
    product.files = {join(dir, "magnetization.csv"), join(dir, "magnetization.svg")};
    write_csv(product.files[0], table);
    write_svg(product.files[1], plot);
    product.summary = brief("magnetization: %g crossings, one-magnon h_c = %.6g",
                            static_cast<double>(scan.crossings.size()), hc.one_magnon);
    return product;
}

// ---- defect-density rate sweep ----

DataProduct product_kz(const Config& cfg, const std::string& dir) {
    const ModelSpec model = model_from(cfg, 0.5);
    const CriticalFieldEstimate hc = finite_size_critical_field(model);

    QuenchProtocol base;
    base.h_start = cfg.number_or("h_start", 1.5 * hc.one_magnon);
    base.h_final = cfg.number_or("h_final", 0.0);
    base.power = cfg.number_or("power", 1.0);
    base.seed_field = cfg.number_or("seed", 0.05);
    base.tolerance = cfg.number_or("tolerance", 1e-6);

    const long count = cfg.integer_or("rates", 4);
    const double rate_max = cfg.number_or("rate_max", 0.1);
    const double rate_min = cfg.number_or("rate_min", 0.01);
    if (count < 2 || !(rate_min > 0.0) || !(rate_max > rate_min))
        throw error("product", "need rates >= 2 and 0 < rate_min < rate_max");
    std::vector<double> rates(count);
    for (long i = 0; i < count; ++i)
        rates[i] = rate_max * std::pow(rate_min / rate_max,
                                       static_cast<double>(i) / static_cast<double>(count - 1));

    const KibbleZurekSweep sweep = kz_sweep(model, base, rates);

    CsvTable table;
    table.schema = "kz";
    table.config_hash = cfg.hash();
    table.column("rate", "J0^2");
    table.column("defect_density", "1");
    table.column("zeta_fit", "1");
    table.column("zeta_predicted", "1");
    for (const RatePoint& pt : sweep.points)
        table.row({format_number(pt.rate), format_number(pt.defect_density),
                   format_number(sweep.zeta_fit), format_number(sweep.zeta_predicted)});

    SvgPlot plot;
    plot.caption = "kz_sweep: defect density vs ramp rate, N = " + std::to_string(model.sites);
    plot.x_label = "rate";
    plot.y_label = "defect density";
    plot.log_x = true;
    plot.log_y = true;
    SvgSeries dots;
    dots.label = "measured";
    dots.markers = true;
    dots.line = false;
    double mx = 0, my = 0;
    for (const RatePoint& pt : sweep.points) {
        dots.x.push_back(pt.rate);
        dots.y.push_back(pt.defect_density);
        mx += std::log(pt.rate);
        my += std::log(pt.defect_density);
    }
    mx /= static_cast<double>(sweep.points.size());
    my /= static_cast<double>(sweep.points.size());
    SvgSeries fitline;
    fitline.label = brief("fit zeta=%.3f (pred %.3f)", sweep.zeta_fit, sweep.zeta_predicted);
    fitline.color = palette[1];
    for (double r : {rates.back(), rates.front()}) {
        fitline.x.push_back(r);
        fitline.y.push_back(std::exp(my + sweep.zeta_fit * (std::log(r) - mx)));
    }
    plot.series.push_back(std::move(fitline));
    plot.series.push_back(std::move(dots));

    DataProduct product;
    product.kind = "kz_sweep";
    product.files = {join(dir, "kz_sweep.csv"), join(dir, "kz_sweep.svg")};
    write_csv(product.files[0], table);
    write_svg(product.files[1], plot);
    product.summary =
        brief("kz_sweep: zeta_fit = %.4f, predicted %.4f", sweep.zeta_fit, sweep.zeta_predicted);
    return product;
}

} // namespace

const std::vector<std::string>& product_kinds() {
    static const std::vector<std::string> kinds = {
        "fig1a", "fig1b",         "fig1b_inset", "fig2", "fig3a",
        "fig3b", "magnetization", "kz_sweep",    "modes"};
    return kinds;
}

DataProduct make_product(const std::string& kind, const Config& cfg, std::string outdir) {
    const std::string dir = resolve_outdir(cfg, std::move(outdir));
    if (kind == "modes") return product_modes(cfg, dir);
    if (kind == "fig1a") return product_fig1a(cfg, dir);
    if (kind == "fig1b") return product_fig1b(cfg, dir, false);
    if (kind == "fig1b_inset") return product_fig1b(cfg, dir, true);
    if (kind == "fig2") return product_fig2(cfg, dir);
    if (kind == "fig3a") return product_rg(kind, cfg, dir, 1.7);
    if (kind == "fig3b") return product_rg(kind, cfg, dir, 2.3);
    if (kind == "magnetization") return product_magnetization(cfg, dir);
    if (kind == "kz_sweep") return product_kz(cfg, dir);
    std::string msg = "unknown product '" + kind + "'; available:";
    for (const std::string& k : product_kinds()) msg += " " + k;
    throw error("product", msg);
}

}
