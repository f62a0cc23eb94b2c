// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chaoslab/experiment/bounds_report.hpp"
#include "chaoslab/experiment/config.hpp"
#include "chaoslab/experiment/rates.hpp"
#include "chaoslab/metrics/cumulant.hpp"
#include "chaoslab/metrics/divergence.hpp"
#include "chaoslab/particles/simulator.hpp"
#include "chaoslab/pde/g_hierarchy.hpp"
#include "chaoslab/pde/mckean_vlasov.hpp"

using namespace chaoslab;
namespace fs = std::filesystem;

namespace
{
struct CommonArgs
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("--config", args.config, "key = value configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out, "output directory (overrides output_dir)");
    cmd->add_option("--seed", args.seed, "base seed (overrides seed)");
}

//! Config with command-line overrides applied, so the hash covers them
KeyValueConfig load(CommonArgs const& args)
{
    auto kv = KeyValueConfig::from_file(args.config);
    if (!args.out.empty())
        kv.set("output_dir", args.out);
    if (args.seed)
        kv.set("seed", std::to_string(*args.seed));
    return kv;
}

fs::path output_dir(ExperimentConfig const& cfg)
{
    fs::path dir = cfg.output_dir.empty() ? fs::path("out") : fs::path(cfg.output_dir);
    fs::create_directories(dir);
    return dir;
}

void write_manifest(fs::path const& dir, ExperimentConfig const& cfg,
                    nlohmann::json extra)
{
    extra["config_hash"] = cfg.config_hash;
    extra["kernel_hash"] = cfg.kernel.hash();
    extra["seed"] = cfg.seed;
    std::ofstream(dir / "manifest.json") << extra.dump(2) << '\n';
}

//! Gnuplot blocks: one `t x value` line per node, blank line between times
void write_series(FieldSeries const& series, fs::path const& path)
{
    std::ofstream os(path);
    os << "# t x rho\n";
    char buf[128];
    for (std::size_t n = 0; n < series.size(); ++n)
    {
        auto const& f = series.frames[n];
        for (int m = 0; m < f.grid().points(); ++m)
        {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", series.times[n],
                          f.grid().node(m), f[m]);
            os << buf;
        }
        os << '\n';
    }
}

TimeGrid time_grid(ExperimentConfig const& cfg, KeyValueConfig const& kv)
{
    return TimeGrid::from_horizon(cfg.horizon, cfg.dt,
                                  static_cast<int>(kv.get_int("save_every", 1)));
}

SimConfig sim_config(ExperimentConfig const& cfg, KeyValueConfig const& kv)
{
    SimConfig sim;
    sim.n_particles = static_cast<int>(
        kv.get_int("n_particles", cfg.n_list.empty() ? 1 : cfg.n_list.front()));
    sim.dim = cfg.dim;
    sim.dt = cfg.dt;
    sim.horizon = cfg.horizon;
    sim.n_replicas = cfg.replicas;
    sim.base_seed = cfg.seed;
    sim.kernel = cfg.kernel;
    sim.initial_density = cfg.initial_density();
    sim.include_self = kv.get_bool("include_self", true);
    sim.fast_drift = kv.get_bool("fast_drift", true);
    return sim;
}

int cmd_simulate(CommonArgs const& args)
{
    auto const kv = load(args);
    auto const cfg = ExperimentConfig::from_config(kv);
    auto const sim = sim_config(cfg, kv);
    auto const snaps = run_ensemble(sim, cfg.output_times);
    auto const dir = output_dir(cfg);
    bool const raw = kv.get_string("snapshot_format", "raw") == "raw";
    auto const file = dir / (raw ? "snapshots.bin" : "snapshots.csv");
    write_snapshots(snaps, file.string(), raw ? SnapshotFormat::raw : SnapshotFormat::csv);
    write_manifest(dir, cfg,
                   {{"command", "simulate"},
                    {"n_particles", sim.n_particles},
                    {"replicas", sim.n_replicas},
                    {"snapshots", file.filename().string()}});
    std::cout << "wrote " << file.string() << '\n';
    return 0;
}

int cmd_solve_mv(CommonArgs const& args)
{
    auto const kv = load(args);
    auto const cfg = ExperimentConfig::from_config(kv);
    auto const tg = time_grid(cfg, kv);
    auto const f = cfg.initial_density();
    auto const scheme = kv.get_string("scheme", "pde");
    FieldSeries rho;
    nlohmann::json info{{"command", "solve-mv"}, {"scheme", scheme}};
    if (scheme == "pde")
    {
        auto const sol = solve_mckean_vlasov(f, cfg.kernel, tg);
        rho = sol.rho;
        info["max_step_mass_drift"] = sol.diagnostics.max_step_mass_drift;
        info["min_value"] = sol.diagnostics.min_value;
        info["l2_growth_excess"] = l2_growth_excess(rho, cfg.kernel);
    }
    else if (scheme == "map")
    {
        rho = solve_mean_field_map(f, cfg.kernel, tg);
    }
    else
    {
        throw std::invalid_argument("scheme must be pde or map");
    }
    auto const dir = output_dir(cfg);
    if (cfg.dim == 1)
        write_series(rho, dir / "rho.dat");
    write_manifest(dir, cfg, info);
    std::cout << "solved " << rho.size() << " frames\n";
    return 0;
}

int cmd_solve_hierarchy(CommonArgs const& args)
{
    auto const kv = load(args);
    auto const cfg = ExperimentConfig::from_config(kv);
    auto const tg = time_grid(cfg, kv);
    HierarchyOptions opts;
    opts.i_max = cfg.order;
    auto const gt = solve_g_hierarchy(cfg.initial_density(), cfg.kernel, tg, opts);
    auto const dir = output_dir(cfg);
    save_gtable(gt, (dir / "gtable").string());
    nlohmann::json marg = nlohmann::json::object();
    for (auto const& [idx, v] : gt.max_marginal)
        marg[std::to_string(idx.i) + "," + std::to_string(idx.j)] = v;
    write_manifest(dir, cfg, {{"command", "solve-hierarchy"}, {"max_marginal", marg}});
    std::cout << "saved " << gt.entries.size() << " entries at " << gt.node_count()
              << " nodes\n";
    return 0;
}

int cmd_metrics(CommonArgs const& args)
{
    auto const kv = load(args);
    auto const cfg = ExperimentConfig::from_config(kv);
    fs::path snap_path = kv.get_string("snapshots");
    if (snap_path.is_relative() && !kv.base_dir().empty() && !fs::exists(snap_path))
        snap_path = fs::path(kv.base_dir()) / snap_path;
    auto const snaps = read_snapshots_raw(snap_path.string());
    if (snaps.dim != 1)
        throw std::invalid_argument("metrics run on T^1 snapshots");
    auto const rho = solve_mean_field_map(cfg.initial_density(), cfg.kernel,
                                          TimeGrid::from_horizon(cfg.horizon, cfg.dt));
    HistogramOptions hist;
    hist.bins = cfg.histogram_bins;
    hist.bootstrap_resamples = cfg.bootstrap_resamples;
    hist.seed = cfg.seed;
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t ti = 0; ti < snaps.times.size(); ++ti)
    {
        double const t = snaps.times[ti];
        auto const& rho_t = rho.frames.at(std::llround(t / cfg.dt));
        for (int j : cfg.j_list)
        {
            auto const samples = extract_marginal_samples(snaps, ti, j, true);
            auto const report = divergence_from_samples(samples, tensor_power(rho_t, j), hist);
            out.push_back({{"t", t},
                           {"j", j},
                           {"report", nlohmann::json::parse(report.to_json())}});
        }
    }
    auto const dir = output_dir(cfg);
    std::ofstream(dir / "metrics.json") << out.dump(2) << '\n';
    write_manifest(dir, cfg, {{"command", "metrics"}, {"snapshots", snap_path.string()}});
    std::cout << "wrote " << (dir / "metrics.json").string() << '\n';
    return 0;
}

int cmd_bounds(CommonArgs const& args)
{
    auto kv = load(args);
    if (!kv.has("output_dir"))
        kv.set("output_dir", "out");
    auto const report = run_bounds_report(BoundsReportOptions::from_config(kv));
    for (auto const& c : report.checks)
        std::cout << c.summary() << '\n';
    return report.all_pass() ? 0 : 1;
}

int cmd_rates(CommonArgs const& args)
{
    auto kv = load(args);
    if (!kv.has("output_dir"))
        kv.set("output_dir", "out");
    auto const cfg = ExperimentConfig::from_config(kv);
    auto const result = run_rate_experiment(cfg);
    if (!result.completed)
    {
        std::cerr << "failed at " << result.failed_stage << ": "
                  << result.failure_message << '\n';
        return 1;
    }
    // Fit |estimate| against N per (observable, j, t)
    std::map<std::tuple<std::string, int, double>, std::vector<std::pair<double, double>>>
        series;
    for (auto const& r : result.rows)
        series[{r.observable, r.j, r.t}].emplace_back(r.n_particles, std::abs(r.estimate));
    std::optional<double> expected;
    if (kv.has("expected_slope"))
        expected = kv.get_double("expected_slope");
    double const slope_tol = kv.get_double("slope_tolerance", 0.3);
    bool ok = true;
    std::ofstream fits(fs::path(cfg.output_dir) / "fits.dat");
    fits << "# observable j t slope slope_se intercept\n";
    for (auto const& [key, pts] : series)
    {
        auto const& [obs, j, t] = key;
        if (pts.size() < 3)
            continue;
        try
        {
            auto const fit = fit_rate(pts);
            bool const pass = !expected || std::abs(fit.slope - *expected) <= slope_tol;
            ok = ok && pass;
            fits << obs << ' ' << j << ' ' << t << ' ' << fit.slope << ' '
                 << fit.slope_se << ' ' << fit.intercept << '\n';
            std::cout << (expected ? (pass ? "PASS " : "FAIL ") : "") << obs << " j=" << j
                      << " t=" << t << " slope=" << fit.slope << " +- " << fit.slope_se
                      << '\n';
        }
        catch (std::invalid_argument const& e)
        {
            std::cout << obs << " j=" << j << " t=" << t << " no fit: " << e.what() << '\n';
            ok = ok && !expected;
        }
    }
    return ok ? 0 : 1;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"chaoslab: particle systems, mean-field hierarchies and bounds"};
    app.require_subcommand(1);

    std::map<std::string, CommonArgs> args;
    std::map<std::string, int (*)(CommonArgs const&)> handlers{
        {"simulate", cmd_simulate},       {"solve-mv", cmd_solve_mv},
        {"solve-hierarchy", cmd_solve_hierarchy}, {"metrics", cmd_metrics},
        {"bounds", cmd_bounds},           {"rates", cmd_rates}};
    std::map<std::string, std::string> help{
        {"simulate", "run the particle ensemble and write snapshots"},
        {"solve-mv", "solve the mean-field equation"},
        {"solve-hierarchy", "solve the correction hierarchy"},
        {"metrics", "divergences of snapshot marginals from the mean-field law"},
        {"bounds", "certify the iterated-integral lattice"},
        {"rates", "measure finite-N bias and cumulants over an N grid"}};
    for (auto const& [name, fn] : handlers)
        add_common(app.add_subcommand(name, help[name]), args[name]);

    CLI11_PARSE(app, argc, argv);
    try
    {
        for (auto const& [name, fn] : handlers)
            if (app.got_subcommand(name))
                return fn(args[name]);
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
