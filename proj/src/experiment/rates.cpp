// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/experiment/rates.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "chaoslab/metrics/divergence.hpp"
#include "chaoslab/partition/cluster.hpp"
#include "chaoslab/pde/g_hierarchy.hpp"
#include "chaoslab/pde/mckean_vlasov.hpp"

namespace chaoslab
{
namespace
{
//! Rectangle-rule integral of phi^(x)j against an arity-j field
double integrate_against(Observable const& phi, GridField const& field)
{
    auto const& grid = field.grid();
    int const m = grid.points();
    std::vector<double> values(m);
    for (int n = 0; n < m; ++n)
    {
        double const x = grid.node(n);
        values[n] = phi(std::span<double const>(&x, 1));
    }
    int const j = field.arity();
    double s = 0;
    for (std::size_t idx = 0; idx < field.size(); ++idx)
    {
        double w = 1;
        std::size_t rest = idx;
        for (int a = 0; a < j; ++a)
        {
            w *= values[rest % m];
            rest /= m;
        }
        s += w * field[idx];
    }
    return s * grid.cell_volume(j);
}

int step_of(double t, double dt)
{
    return static_cast<int>(std::llround(t / dt));
}

nlohmann::json row_json(RateRow const& r)
{
    return {{"N", r.n_particles},   {"j", r.j},
            {"i", r.order},         {"t", r.t},
            {"observable", r.observable}, {"estimate", r.estimate},
            {"prediction", r.prediction}, {"se", r.se}};
}

void write_json(nlohmann::json const& j, std::filesystem::path const& path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

void sort_rows(std::vector<RateRow>& rows)
{
    std::sort(rows.begin(), rows.end(), [](RateRow const& a, RateRow const& b) {
        return std::tie(a.n_particles, a.j, a.t, a.observable)
               < std::tie(b.n_particles, b.j, b.t, b.observable);
    });
}
}  // namespace

//---------------------------------------------------------------------------//
RateFit fit_rate(std::vector<std::pair<double, double>> const& points)
{
    if (points.size() < 3)
        throw std::invalid_argument("rate fit needs at least three points");
    RateFit fit;
    for (auto const& [x, y] : points)
    {
        if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y))
            throw std::invalid_argument("rate fit needs positive finite values");
        fit.log_x.push_back(std::log(x));
        fit.log_y.push_back(std::log(y));
    }
    double const n = static_cast<double>(points.size());
    double const mx = std::accumulate(fit.log_x.begin(), fit.log_x.end(), 0.0) / n;
    double const my = std::accumulate(fit.log_y.begin(), fit.log_y.end(), 0.0) / n;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < points.size(); ++k)
    {
        sxx += (fit.log_x[k] - mx) * (fit.log_x[k] - mx);
        sxy += (fit.log_x[k] - mx) * (fit.log_y[k] - my);
    }
    if (!(sxx > 0))
        throw std::invalid_argument("rate fit needs distinct abscissae");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0;
    for (std::size_t k = 0; k < points.size(); ++k)
    {
        double const e = fit.log_y[k] - fit.intercept - fit.slope * fit.log_x[k];
        ssr += e * e;
    }
    fit.slope_se = std::sqrt(ssr / (n - 2) / sxx);
    return fit;
}

Observable named_observable(std::string const& name)
{
    if (name.size() > 3 && (name.starts_with("cos") || name.starts_with("sin")))
    {
        int mode = 0;
        try
        {
            std::size_t used = 0;
            mode = std::stoi(name.substr(3), &used);
            if (used != name.size() - 3)
                mode = 0;
        }
        catch (std::logic_error const&)
        {
            mode = 0;
        }
        if (mode >= 1)
            return name.starts_with("cos") ? fourier_observable(mode, 1, 0)
                                           : fourier_observable(mode, 0, 1);
    }
    throw std::invalid_argument("unknown observable '" + name
                                + "' (expected cos<n> or sin<n>)");
}

void write_rate_csv(std::vector<RateRow> const& rows, std::string const& path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path);
    os << rate_csv_header << '\n';
    char buf[512];
    for (auto const& r : rows)
    {
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%s,%.17g,%.17g,%.17g\n",
                      r.n_particles, r.j, r.order, r.t, r.observable.c_str(),
                      r.estimate, r.prediction, r.se);
        os << buf;
    }
}

//---------------------------------------------------------------------------//
RateResult run_rate_experiment(ExperimentConfig const& cfg)
{
    cfg.validate();
    if (cfg.dim != 1)
        throw std::invalid_argument("rate experiments run on T^1");
    std::vector<std::pair<std::string, Observable>> phis;
    for (auto const& name : cfg.observables)
        phis.emplace_back(name, named_observable(name));

    RateResult result;
    for (std::size_t n = 0; n < cfg.n_list.size(); ++n)
        result.seeds.push_back(derive_seed(cfg.seed, n));

    std::optional<std::filesystem::path> out_dir;
    if (!cfg.output_dir.empty())
    {
        out_dir = cfg.output_dir;
        std::filesystem::create_directories(*out_dir);
    }
    auto manifest = [&] {
        nlohmann::json seeds = nlohmann::json::object();
        for (std::size_t n = 0; n < cfg.n_list.size(); ++n)
            seeds[std::to_string(cfg.n_list[n])] = result.seeds[n];
        return nlohmann::json{{"config_hash", cfg.config_hash},
                              {"kernel_hash", cfg.kernel.hash()},
                              {"seed", cfg.seed},
                              {"seeds", seeds},
                              {"replicas", cfg.replicas},
                              {"dt", cfg.dt},
                              {"grid_points", cfg.grid_points},
                              {"rows", result.rows.size()},
                              {"completed", result.completed}};
    };
    auto persist = [&] {
        if (!out_dir)
            return;
        sort_rows(result.rows);
        write_rate_csv(result.rows, (*out_dir / "rates.csv").string());
        write_json(manifest(), *out_dir / "manifest.json");
        if (!result.completed)
        {
            nlohmann::json rows = nlohmann::json::array();
            for (auto const& r : result.rows)
                rows.push_back(row_json(r));
            write_json({{"stage", result.failed_stage},
                        {"message", result.failure_message},
                        {"config_hash", cfg.config_hash},
                        {"completed_rows", rows}},
                       *out_dir / "failure.json");
        }
    };

    std::string stage = "mean-field";
    try
    {
        GridField const f = cfg.initial_density();
        TimeGrid const tg = TimeGrid::from_horizon(cfg.horizon, cfg.dt, 1);
        FieldSeries const rho = solve_mean_field_map(f, cfg.kernel, tg);

        std::optional<GTable> gt;
        if (cfg.order >= 1)
        {
            stage = "hierarchy";
            int save_every = tg.n_steps;
            for (double t : cfg.output_times)
                save_every = std::gcd(save_every, step_of(t, cfg.dt));
            auto const hier_tg = TimeGrid::from_horizon(cfg.horizon, cfg.dt,
                                                        std::max(save_every, 1));
            gt = solve_g_hierarchy(f, cfg.kernel, hier_tg, HierarchyOptions{1});
        }

        for (std::size_t n_index = 0; n_index < cfg.n_list.size(); ++n_index)
        {
            int const n_particles = cfg.n_list[n_index];
            double const inv_n = 1.0 / n_particles;
            stage = "simulate N=" + std::to_string(n_particles);
            SimConfig sim;
            sim.n_particles = n_particles;
            sim.dim = 1;
            sim.dt = cfg.dt;
            sim.horizon = cfg.horizon;
            sim.n_replicas = cfg.replicas;
            sim.base_seed = result.seeds[n_index];
            sim.kernel = cfg.kernel;
            sim.initial_density = f;

            auto visit = [&](std::size_t ti, ParticleEnsemble const& ens) {
                double const t = cfg.output_times[ti];
                GridField const& rho_t = rho.frames.at(step_of(t, cfg.dt));
                std::optional<CorrectionTable> slice;
                if (gt)
                    slice = gt->slice(gt->node_at(t));
                auto add = [&](int j, std::string obs, SampleEstimate est,
                               double prediction) {
                    result.rows.push_back({n_particles, j, cfg.order, t, std::move(obs),
                                           est.estimate, prediction,
                                           est.standard_error});
                };
                for (int j : cfg.j_list)
                {
                    for (auto const& [name, phi] : phis)
                    {
                        if (j == 1)
                        {
                            auto est = exchangeable_mean(replica_sums(ens, phi));
                            est.estimate -= integrate_against(phi, rho_t);
                            double const pred
                                = slice ? inv_n * integrate_against(phi, slice->at({1, 1}))
                                        : 0.0;
                            add(1, "mean:" + name, est, pred);
                        }
                        else if (j == 2)
                        {
                            auto const est
                                = exchangeable_pair_cumulant(replica_sums(ens, phi));
                            double const pred
                                = slice ? inv_n * integrate_against(phi, slice->at({1, 2}))
                                        : 0.0;
                            add(2, "cumulant:" + name, est, pred);
                        }
                        else
                        {
                            // First-order clusters vanish beyond two particles
                            auto const samples = extract_marginal_samples(ens, j, false);
                            auto const est = joint_cumulant(
                                samples, std::vector<Observable>(j, phi));
                            add(j, "cumulant:" + name, est, 0.0);
                        }
                    }
                    if (cfg.chi_squared && j <= max_grid_arity)
                    {
                        HistogramOptions opts;
                        opts.bins = cfg.histogram_bins;
                        opts.bootstrap_resamples = cfg.bootstrap_resamples;
                        opts.seed = derive_seed(sim.base_seed, 1000 + j);
                        auto const samples = extract_marginal_samples(ens, j, true);
                        auto const est
                            = chi_squared_from_samples(samples, tensor_power(rho_t, j), opts);
                        double pred = 0;
                        if (slice)
                        {
                            auto const f1 = assemble_correction(1, j, *slice);
                            auto const& rho_pde = slice->at({0, 1});
                            pred = inv_n * inv_n * weighted_l2_error(f1, rho_pde);
                        }
                        add(j, "chi2", est, pred);
                    }
                }
            };
            run_ensemble(sim, cfg.output_times, visit);
        }
        result.completed = true;
    }
    catch (std::exception const& e)
    {
        result.completed = false;
        result.failed_stage = stage;
        result.failure_message = e.what();
    }
    sort_rows(result.rows);
    persist();
    return result;
}

}  // namespace chaoslab
