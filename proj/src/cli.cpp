#include "polystab/cli.hpp"

#include "polystab/asymptotics.hpp"
#include "polystab/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>

namespace polystab::cli {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& stem, const std::string& ext) {
    return (std::filesystem::path(cfg.out_dir) / (stem + "." + ext)).string();
}

void write_table(const RunConfig& cfg, const std::string& stem, const std::string& csv, const std::string& json) {
    if (cfg.format == OutputFormat::json) {
        io::write_atomic(out_path(cfg, stem, "json"), json);
    } else {
        io::write_atomic(out_path(cfg, stem, "csv"), csv);
    }
}

numerics::Grid make_grid(const RunConfig& cfg) { return numerics::Grid::chebyshev(cfg.grid_n); }

spec::SpectrumOptions spectrum_options(const RunConfig& cfg) {
    spec::SpectrumOptions o;
    o.cfg.rel_tol = cfg.tol;
    o.cfg.abs_tol = 1e-2 * cfg.tol;
    o.variant = cfg.variant;
    return o;
}

// Solves the base state or reports the failure and returns nullopt.
std::optional<base::BaseState> solve(const RunConfig& cfg, std::ostream& err) {
    try {
        return base::solve_base_state(cfg.params, make_grid(cfg));
    } catch (const base::ShootingNoConvergence& e) {
        const auto& d = e.diagnostics();
        err << e.what() << "\n  unknowns: " << io::fmt(d.unknowns[0]) << ' ' << io::fmt(d.unknowns[1]) << ' '
            << io::fmt(d.unknowns[2]) << "\n  best residual: " << io::fmt(d.residual)
            << "\n  homotopy stages: " << d.homotopy_stages << '\n';
    } catch (const Error& e) {
        err << "base state failed: " << e.what() << '\n';
    }
    return std::nullopt;
}

struct Landmarks {
    double max_u = 0.0, argmax_u = 0.0, asymmetry = 0.0, bottom_ratio = 0.0;
};

Landmarks landmarks(const base::BaseState& s) {
    Landmarks m;
    std::vector<double> yu(s.u.size()), au(s.u.size());
    double max_bottom = 0.0;
    for (int j = 0; j < s.size(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        const double y = s.grid.node(j);
        if (std::abs(s.u[k]) > std::abs(m.max_u)) {
            m.max_u = s.u[k];
            m.argmax_u = y;
        }
        if (y <= -0.25) max_bottom = std::max(max_bottom, std::abs(s.u[k]));
        yu[k] = y * s.u[k];
        au[k] = std::abs(s.u[k]);
    }
    const double norm = s.grid.integrate(au);
    m.asymmetry = norm > 0.0 ? s.grid.integrate(yu) / norm : 0.0;
    m.bottom_ratio = m.max_u != 0.0 ? max_bottom / std::abs(m.max_u) : 0.0;
    return m;
}

}  // namespace

int cmd_base_state(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto st = solve(cfg, err);
    if (!st) return exit_base_state;
    const base::BaseResidual r = base::base_residual_breakdown(*st);
    const Landmarks m = landmarks(*st);
    write_table(cfg, "base_state", io::base_state_csv(*st), io::base_state_json(*st));
    io::write_atomic(out_path(cfg, "base_state_plot", "tsv"), io::base_state_tsv(*st));
    out << "residual " << io::fmt(r.max()) << '\n'
        << "far_wall_mismatch " << io::fmt(st->diagnostics.residual) << '\n'
        << "C0 " << io::fmt(st->C0) << '\n'
        << "max_u " << io::fmt(m.max_u) << '\n'
        << "argmax_u " << io::fmt(m.argmax_u) << '\n'
        << "asymmetry " << io::fmt(m.asymmetry) << '\n';
    return exit_ok;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto st = solve(cfg, err);
    if (!st) return exit_base_state;
    const double omega = cfg.params.omega;
    const asym::AsymptoticReport rep = asym::stability_criterion(*st, omega);
    std::vector<std::complex<double>> seeds;
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) seeds.push_back(asym::asymptotic_lambda(*st, omega, k));
    spec::SpectrumOptions o = spectrum_options(cfg);
    o.max_box = 0.45 * rep.im_spacing;
    const numerics::Rect region = asym::eigenvalue_band(*st, omega, cfg.k_min, cfg.k_max);
    spec::SpectrumResult res;
    try {
        res = spec::find_eigenvalues(*st, omega, region, seeds, o);
    } catch (const Error& e) {
        err << "spectrum failed: " << e.what() << '\n';
        return exit_uncertified;
    }
    write_table(cfg, "spectrum", io::spectrum_csv(res), io::spectrum_json(res));
    io::write_atomic(out_path(cfg, "spectrum_plot", "tsv"), io::spectrum_tsv(res));
    const bool all_certified =
        std::all_of(res.eigenvalues.begin(), res.eigenvalues.end(), [](const spec::Eigenvalue& e) { return e.certified; });
    out << "roots " << res.eigenvalues.size() << '\n'
        << "region_winding " << res.region_winding << '\n'
        << "missed_count_estimate " << res.missed_count_estimate << '\n';
    if (!all_certified || res.region_winding != res.found_in_region) {
        err << "UncertifiedRoots: winding " << res.region_winding << ", found " << res.found_in_region << '\n';
        return exit_uncertified;
    }
    return exit_ok;
}

int cmd_asymptotics(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto st = solve(cfg, err);
    if (!st) return exit_base_state;
    const asym::AsymptoticReport rep = asym::stability_criterion(*st, cfg.params.omega);
    const std::string json = io::asymptotics_json(rep);
    io::write_atomic(out_path(cfg, "asymptotics", "json"), json);
    out << json;
    return exit_ok;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto st = solve(cfg, err);
    if (!st) return exit_base_state;
    const double omega = cfg.params.omega;
    const asym::AsymptoticReport rep = asym::stability_criterion(*st, omega);
    io::write_atomic(out_path(cfg, "asymptotics", "json"), io::asymptotics_json(rep));
    asym::VerificationTable t;
    try {
        t = asym::verify_spectrum(*st, omega, cfg.k_min, cfg.k_max, spectrum_options(cfg));
    } catch (const Error& e) {
        err << "verification failed: " << e.what() << '\n';
        return exit_verification;
    }
    const std::string stem = cfg.variant == lin::Variant::exact ? "verify" : "verify_truncated";
    write_table(cfg, stem, io::verify_csv(t), io::verify_json(t));
    out << "criterion_S " << io::fmt(rep.criterion_S) << '\n'
        << "err_times_k_max_over_median " << io::fmt(t.spread_max_over_median) << '\n'
        << "upper_half_growth " << io::fmt(t.upper_half_growth) << '\n'
        << "verified " << (t.ok ? "yes" : "no") << '\n';
    return t.ok ? exit_ok : exit_verification;
}

int cmd_sweep(const RunConfig& cfg, const std::string& key, const std::vector<double>& values, std::ostream& out,
              std::ostream& err) {
    const auto& names = model::ModelParams::field_names();
    if (std::find(names.begin(), names.end(), key) == names.end()) {
        err << "ConfigError: unknown sweep key '" << key << "'\n";
        return exit_config;
    }
    if (values.empty()) {
        err << "ConfigError: no sweep values\n";
        return exit_config;
    }
    const numerics::Grid grid = make_grid(cfg);
    std::vector<io::SweepRow> rows;
    std::optional<std::array<double, 3>> seed;
    for (double v : values) {
        io::SweepRow row;
        row.value = v;
        model::ModelParams p = cfg.params;
        p.set(key, v);
        try {
            base::BaseStateOptions bo;
            bo.seed = seed;
            const base::BaseState st = base::solve_base_state(p, grid, bo);
            seed = st.diagnostics.unknowns;
            const asym::AsymptoticReport rep = asym::stability_criterion(st, p.omega);
            const Landmarks m = landmarks(st);
            row.criterion_S = rep.criterion_S;
            row.re_lambda_inf = rep.re_lambda_inf;
            row.max_abs_u = std::abs(m.max_u);
            row.bottom_ratio = m.bottom_ratio;
            row.residual = base::base_residual(st);
            row.ok = row.residual < 1e-8;
        } catch (const Error& e) {
            err << key << " = " << io::fmt(v) << ": " << e.what() << '\n';
            row.criterion_S = row.re_lambda_inf = row.max_abs_u = row.bottom_ratio = row.residual =
                std::numeric_limits<double>::quiet_NaN();
            seed.reset();
        }
        rows.push_back(row);
    }
    write_table(cfg, "sweep", io::sweep_csv(rows), io::sweep_json(rows));
    const auto good = std::count_if(rows.begin(), rows.end(), [](const io::SweepRow& r) { return r.ok; });
    out << "rows " << rows.size() << " ok " << good << '\n';
    return good > 0 ? exit_ok : exit_base_state;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral stability of stationary polymeric MHD channel flow"};
    app.require_subcommand(1, 1);

    std::string config_path, out_dir, variant, format, sweep_key;
    std::optional<double> omega;
    std::optional<int> k_min, k_max, grid_n;
    std::vector<double> values;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out-dir", out_dir, "output directory");
        sub->add_option("--omega", omega, "wavenumber");
        sub->add_option("--k-min", k_min, "first mode index");
        sub->add_option("--k-max", k_max, "last mode index");
        sub->add_option("--grid-n", grid_n, "Chebyshev nodes of the base state");
        sub->add_option("--variant", variant, "exact | truncated");
        sub->add_option("--format", format, "csv | json");
    };
    CLI::App* c_base = app.add_subcommand("base-state", "solve the stationary flow");
    CLI::App* c_spec = app.add_subcommand("spectrum", "certified eigenvalues");
    CLI::App* c_asym = app.add_subcommand("asymptotics", "asymptotic line and stability integral");
    CLI::App* c_ver = app.add_subcommand("verify", "numerical vs asymptotic eigenvalues");
    CLI::App* c_sweep = app.add_subcommand("sweep", "parameter study");
    for (CLI::App* s : {c_base, c_spec, c_asym, c_ver, c_sweep}) add_common(s);
    c_sweep->add_option("--sweep-key", sweep_key, "parameter name")->required();
    c_sweep->add_option("--values", values, "parameter values")->expected(1, -1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_config;
    }

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (omega) cfg.params.omega = *omega;
        if (k_min) cfg.k_min = *k_min;
        if (k_max) cfg.k_max = *k_max;
        if (grid_n) cfg.grid_n = *grid_n;
        if (!variant.empty()) cfg.variant = parse_variant(variant);
        if (!format.empty()) cfg.format = parse_format(format);
        cfg.validate();
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_config;
    }

    try {
        if (c_base->parsed()) return cmd_base_state(cfg, out, err);
        if (c_spec->parsed()) return cmd_spectrum(cfg, out, err);
        if (c_asym->parsed()) return cmd_asymptotics(cfg, out, err);
        if (c_ver->parsed()) return cmd_verify(cfg, out, err);
        return cmd_sweep(cfg, sweep_key, values, out, err);
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_base_state;
    }
}

}  // namespace polystab::cli
