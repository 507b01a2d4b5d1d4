#include "sllbar/cli.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sllbar/config.hpp"
#include "sllbar/diagnostics.hpp"
#include "sllbar/io.hpp"
#include "sllbar/rng.hpp"
#include "sllbar/spectral.hpp"

namespace sllbar {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    std::string config;
    std::string output_dir = "sllbar_out";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    bool overwrite = false;
    int threads = 1;
};

// Everything a subcommand needs, built once from the validated config.
struct Setup {
    RunConfig cfg;
    Grid grid;
    NoiseModel noise;
    SpectralField u0;
};

Setup make_setup(const Options& opt) {
    RunConfig cfg = parse_config(opt.config);
    if (opt.seed) cfg.solver.seed = *opt.seed;
    Grid grid = cfg.grid.make();
    NoiseModel noise = build_noise_modes(cfg.noise, grid);
    SpectralField u0 = build_initial(cfg.initial, grid);
    return {std::move(cfg), std::move(grid), std::move(noise), std::move(u0)};
}

json noise_json(const NoiseModel& noise) {
    const NoiseCondition nc = check_noise_condition(noise);
    json j{{"J", noise.size()}, {"c_h", nc.c_h}};
    j["tail_estimate"] = nc.tail_estimate ? json(*nc.tail_estimate) : json(nullptr);
    j["warning"] = nc.warning ? json(*nc.warning) : json(nullptr);
    return j;
}

json report_header(const std::string& command, const Setup& s) {
    return {{"command", command},
            {"version", version_string()},
            {"seed", s.cfg.solver.seed},
            {"config", to_json(s.cfg)},
            {"noise", noise_json(s.noise)}};
}

void say(const Options& opt, std::ostream& out, const std::string& msg) {
    if (!opt.quiet) out << msg << '\n';
}

json stop_events(const std::vector<TrajectoryRecord>& records) {
    json events = json::array();
    for (const auto& r : records)
        if (r.stop_reason != StopReason::completed)
            events.push_back({{"path", r.path}, {"stop_reason", to_string(r.stop_reason)}, {"stop_time", r.stop_time}});
    return events;
}

bool any_failure(const EnsembleStats& stats) { return stats.blowups > 0 || stats.nonfinite > 0; }

int cmd_simulate(const Options& opt, std::ostream& out) {
    const Setup s = make_setup(opt);
    prepare_output_dir(opt.output_dir, opt.overwrite);
    const TrajectoryRecord rec = run_trajectory(s.u0, s.cfg.params, s.noise, s.cfg.solver);
    const fs::path dir = opt.output_dir;
    write_series_csv(dir / "series.csv", rec);
    if (rec.final_state) write_snapshot(dir / "final.sllb", *rec.final_state);
    json report = report_header("simulate", s);
    report["trajectory"] = to_json(rec);
    report["stop_events"] = stop_events({rec});
    if (const auto tau = stopping_time(rec, s.cfg.solver.blowup_K)) report["tau_K"] = *tau;
    else report["tau_K"] = nullptr;
    write_json(dir / "report.json", report);
    say(opt, out, "simulate: " + to_string(rec.stop_reason) + " at t=" + format_double(rec.stop_time) +
                      " (" + std::to_string(rec.samples()) + " samples)");
    return kExitOk;
}

json moments_json(const EnsembleStats& stats, const std::vector<double>& powers) {
    json arr = json::array();
    for (double p : powers) {
        const MomentReport m = moment_estimates(stats, p);
        arr.push_back({{"p", m.p},
                       {"horizon", m.horizon},
                       {"sup_l2_pow_2p", to_json(m.sup_l2)},
                       {"int_h2_sq_pow_p", to_json(m.int_h2)},
                       {"int_l4_pow4_pow_p", to_json(m.int_l4)},
                       {"sup_h1_pow_2p", to_json(m.sup_h1)},
                       {"int_h3_sq_pow_p", to_json(m.int_h3)}});
    }
    return arr;
}

void write_ensemble_series(const fs::path& file, const EnsembleStats& stats) {
    std::vector<std::string> header{"t", "paths"};
    const NormKind kinds[] = {NormKind::l2, NormKind::l4, NormKind::h1, NormKind::h2, NormKind::h3, NormKind::grad_l2};
    for (NormKind k : kinds) {
        std::string name = to_string(k);
        for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        header.push_back("mean_" + name);
        header.push_back("var_" + name);
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < stats.times.size(); ++i) {
        std::vector<double> row{stats.times[i], static_cast<double>(stats.norm(NormKind::l2).count[i])};
        for (NormKind k : kinds) {
            row.push_back(stats.norm(k).mean[i]);
            row.push_back(stats.norm(k).variance[i]);
        }
        rows.push_back(std::move(row));
    }
    write_table_csv(file, header, rows);
}

EnsembleStats ensemble_for(const Setup& s, const Options& opt) {
    SolverConfig c = s.cfg.solver;
    // Mode-coefficient observables read the recorded snapshots.
    for (const auto& o : s.cfg.experiment.observables)
        if (o.kind == Observable::Kind::tanh_mode) c.keep_snapshots = true;
    return run_ensemble(s.u0, s.cfg.params, s.noise, c, s.cfg.experiment.paths, opt.threads);
}

int cmd_ensemble(const Options& opt, std::ostream& out) {
    const Setup s = make_setup(opt);
    prepare_output_dir(opt.output_dir, opt.overwrite);
    const EnsembleStats stats = ensemble_for(s, opt);
    const fs::path dir = opt.output_dir;
    write_ensemble_series(dir / "ensemble_series.csv", stats);
    json report = report_header("ensemble", s);
    report["paths"] = stats.paths;
    report["blowups"] = stats.blowups;
    report["nonfinite"] = stats.nonfinite;
    report["stop_events"] = stop_events(stats.records);
    report["moments"] = moments_json(stats, s.cfg.experiment.moment_powers);
    if (stats.times.size() >= 20) {
        const GrowthReport g = h2_time_average(stats);
        report["h2_growth"] = {{"a", g.a}, {"b", g.b}, {"c", g.c}, {"ratio", g.ratio}};
    } else {
        report["h2_growth"] = nullptr;
    }
    write_json(dir / "report.json", report);
    say(opt, out, "ensemble: " + std::to_string(stats.paths) + " paths, " + std::to_string(stats.blowups) +
                      " blow-ups, " + std::to_string(stats.nonfinite) + " nonfinite");
    return any_failure(stats) ? kExitBlowup : kExitOk;
}

int cmd_invariant(const Options& opt, std::ostream& out) {
    const Setup s = make_setup(opt);
    const auto& x = s.cfg.experiment;
    if (s.cfg.solver.t_end < 2.0 * x.burn_in)
        throw ConfigError("experiment.burn_in: horizon must be at least twice the burn-in");
    prepare_output_dir(opt.output_dir, opt.overwrite);
    const EnsembleStats stats = ensemble_for(s, opt);
    const fs::path dir = opt.output_dir;

    json report = report_header("invariant", s);
    report["paths"] = stats.paths;
    report["stop_events"] = stop_events(stats.records);
    json observables = json::array();
    std::vector<std::vector<double>> rows;
    for (std::size_t o = 0; o < x.observables.size(); ++o) {
        const InvariantReport r =
            invariant_average(stats, x.observables[o], x.burn_in, x.windows, x.transition_times);
        json jo{{"observable", x.observables[o].describe()}};
        jo["transition"] = json::array();
        for (std::size_t i = 0; i < r.transition_times.size(); ++i)
            jo["transition"].push_back({{"t", r.transition_times[i]}, {"estimate", to_json(r.transition[i])}});
        jo["windows"] = json::array();
        for (std::size_t i = 0; i < r.windows.size(); ++i) {
            jo["windows"].push_back({{"begin", r.windows[i].begin},
                                     {"end", r.windows[i].end},
                                     {"estimate", to_json(r.window_means[i])}});
            rows.push_back({static_cast<double>(o), r.windows[i].begin, r.windows[i].end,
                            r.window_means[i].value, r.window_means[i].se});
        }
        observables.push_back(jo);
    }
    report["observables"] = observables;
    json tight = json::array();
    for (NormKind space : {NormKind::h1, NormKind::l2})
        for (double R : x.tightness_R)
            tight.push_back({{"space", to_string(space)}, {"R", R}, {"fraction", tightness_statistic(stats, R, space)}});
    report["tightness"] = tight;
    write_table_csv(dir / "windows.csv", {"observable", "begin", "end", "mean", "se"}, rows);
    write_json(dir / "report.json", report);
    say(opt, out, "invariant: " + std::to_string(x.observables.size()) + " observables over " +
                      std::to_string(stats.paths) + " paths");
    return any_failure(stats) ? kExitBlowup : kExitOk;
}

int cmd_converge(const Options& opt, std::ostream& out) {
    const Setup s = make_setup(opt);
    const auto& x = s.cfg.experiment;
    prepare_output_dir(opt.output_dir, opt.overwrite);
    const fs::path dir = opt.output_dir;

    // Level k uses dt / 2^k with 2^(K-k) sub-increments per step: every level
    // sums the same keyed increments of size dt / 2^K, i.e. one Brownian path
    // per path index.
    std::vector<std::vector<SpectralField>> finals;
    bool failed = false;
    json levels = json::array();
    for (int k = 0; k <= x.dt_halvings; ++k) {
        SolverConfig c = s.cfg.solver;
        c.dt = s.cfg.solver.dt / std::ldexp(1.0, k);
        c.noise_substeps = s.cfg.solver.noise_substeps << (x.dt_halvings - k);
        c.record_every = static_cast<int>(std::min<std::int64_t>(c.steps(), 1 << 30));
        c.keep_snapshots = false;
        const EnsembleStats st = run_ensemble(s.u0, s.cfg.params, s.noise, c, x.paths, opt.threads);
        failed = failed || any_failure(st);
        std::vector<SpectralField> f;
        for (const auto& r : st.records) f.push_back(*r.final_state);
        finals.push_back(std::move(f));
        levels.push_back({{"dt", c.dt}, {"noise_substeps", c.noise_substeps}});
    }
    std::vector<std::vector<double>> rows;
    json gaps = json::array();
    for (int k = 0; k < x.dt_halvings; ++k) {
        double mean = 0.0;
        for (int p = 0; p < x.paths; ++p) mean += norm_l2(finals[k][p] - finals[k + 1][p]);
        mean /= x.paths;
        const double dt = s.cfg.solver.dt / std::ldexp(1.0, k);
        rows.push_back({dt, mean});
        gaps.push_back({{"dt", dt}, {"mean_gap_l2", mean}});
    }
    json orders = json::array();
    for (std::size_t k = 0; k + 1 < rows.size(); ++k)
        orders.push_back(rows[k][1] > 0.0 && rows[k + 1][1] > 0.0 ? json(std::log2(rows[k][1] / rows[k + 1][1]))
                                                                 : json(nullptr));
    write_table_csv(dir / "dt_convergence.csv", {"dt", "mean_gap_l2"}, rows);

    json refinement = json::array();
    std::vector<std::vector<double>> ref_rows;
    for (std::size_t i = 0; i + 1 < x.refinement_modes.size(); ++i) {
        const int nc = x.refinement_modes[i], nf = x.refinement_modes[i + 1];
        const double gap = refinement_gap(s.cfg.initial, s.cfg.params, s.cfg.noise, s.cfg.solver, s.grid, nc, nf);
        refinement.push_back({{"n_coarse", nc}, {"n_fine", nf}, {"gap_l2", gap}});
        ref_rows.push_back({static_cast<double>(nc), static_cast<double>(nf), gap});
    }
    write_table_csv(dir / "refinement.csv", {"n_coarse", "n_fine", "gap_l2"}, ref_rows);

    json report = report_header("converge", s);
    report["dt_levels"] = levels;
    report["dt_gaps"] = gaps;
    report["observed_orders"] = orders;
    report["refinement"] = refinement;
    write_json(dir / "report.json", report);
    say(opt, out, "converge: " + std::to_string(rows.size()) + " dt gaps, " + std::to_string(ref_rows.size()) +
                      " refinement gaps");
    return failed ? kExitBlowup : kExitOk;
}

// Deterministic random field with coefficients decaying like (1 + lambda)^-1.
SpectralField sample_field(const Grid& g, std::uint64_t seed, std::uint64_t sample) {
    SpectralField u(g);
    const auto lam = g.eigenvalues();
    for (int c = 0; c < 3; ++c)
        for (std::size_t f = 0; f < u.size(); ++f)
            u(c, f) = keyed_normal(seed, sample, static_cast<std::uint32_t>(c), f) / (1.0 + lam[f]);
    return u;
}

int cmd_check(const Options& opt, std::ostream& out) {
    const Setup s = make_setup(opt);
    prepare_output_dir(opt.output_dir, opt.overwrite);
    const fs::path dir = opt.output_dir;
    std::vector<std::vector<double>> rows;
    double worst_cross = 0.0, worst_grad = 0.0, worst_lap = 0.0;
    const int n = s.cfg.experiment.identity_samples;
    for (int i = 0; i <= n; ++i) {
        // Sample 0 is the configured initial data.
        const SpectralField u = i == 0 ? s.u0 : sample_field(s.grid, s.cfg.solver.seed, static_cast<std::uint64_t>(i));
        const double cross = identity_cross(u);
        const IdentityCheck g = identity_cubic_gradient(u);
        const IdentityCheck l = identity_cubic_laplacian(u);
        worst_cross = std::max(worst_cross, std::fabs(cross));
        worst_grad = std::max(worst_grad, std::fabs(g.residual));
        worst_lap = std::max(worst_lap, std::fabs(l.residual));
        rows.push_back({static_cast<double>(i), cross, g.lhs, g.rhs, g.residual, l.lhs, l.rhs, l.residual});
    }
    write_table_csv(dir / "identities.csv",
                    {"sample", "cross", "cubic_gradient_lhs", "cubic_gradient_rhs", "cubic_gradient_residual",
                     "cubic_laplacian_lhs", "cubic_laplacian_rhs", "cubic_laplacian_residual"},
                    rows);
    json report = report_header("check", s);
    report["identities"] = {{"samples", n + 1},
                            {"max_abs_cross", worst_cross},
                            {"max_abs_cubic_gradient_residual", worst_grad},
                            {"max_abs_cubic_laplacian_residual", worst_lap}};
    write_json(dir / "report.json", report);
    const NoiseCondition nc = check_noise_condition(s.noise);
    say(opt, out, "check: C_h = " + format_double(nc.c_h) + ", max |cross| = " + format_double(worst_cross) +
                      ", max |cubic residual| = " + format_double(std::max(worst_grad, worst_lap)));
    if (nc.warning) say(opt, out, "warning: " + *nc.warning);
    return kExitOk;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral Galerkin simulator for the stochastic Landau-Lifshitz-Baryakhtar equation", "sllbar"};
    app.require_subcommand(1);
    Options opt;
    struct Sub {
        const char* name;
        const char* help;
        int (*run)(const Options&, std::ostream&);
    };
    const Sub subs[] = {
        {"simulate", "Run one trajectory; write series.csv, final.sllb and report.json", cmd_simulate},
        {"ensemble", "Run experiment.paths trajectories; write moments and the H2 growth fit", cmd_ensemble},
        {"invariant", "Observable transition/window averages and tightness fractions", cmd_invariant},
        {"converge", "dt-halving study on shared noise paths and Galerkin refinement gaps", cmd_converge},
        {"check", "Identity residuals on random fields and the noise condition", cmd_check},
    };
    std::vector<CLI::App*> handles;
    for (const auto& sub : subs) {
        CLI::App* sc = app.add_subcommand(sub.name, sub.help);
        sc->add_option("-c,--config", opt.config, "Run configuration file")->required()->check(CLI::ExistingFile);
        sc->add_option("-o,--output-dir", opt.output_dir, "Output directory")->capture_default_str();
        sc->add_option("--seed", opt.seed, "Override solver.seed");
        sc->add_option("--threads", opt.threads, "Worker threads for ensembles")->check(CLI::PositiveNumber);
        sc->add_flag("-q,--quiet", opt.quiet, "Suppress progress output");
        sc->add_flag("--overwrite", opt.overwrite, "Reuse a non-empty output directory");
        handles.push_back(sc);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    try {
        for (std::size_t i = 0; i < handles.size(); ++i)
            if (handles[i]->parsed()) return subs[i].run(opt, out);
        err << app.help();
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sllbar
