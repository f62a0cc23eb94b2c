// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "chaoslab/experiment/bounds_report.hpp"
#include "chaoslab/experiment/config.hpp"
#include "chaoslab/experiment/rates.hpp"

using namespace chaoslab;
namespace fs = std::filesystem;

namespace
{
std::string slurp(fs::path const& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch_dir(std::string const& name)
{
    auto const dir = fs::temp_directory_path() / ("chaoslab_" + name);
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig small_config(fs::path const& out)
{
    auto kv = KeyValueConfig::parse(R"(
        initial_cos = 0.3
        n_list = 5, 10, 20
        j_list = 1, 2
        order = 1
        horizon = 0.1
        output_times = 0.05, 0.1
        dt = 0.005
        replicas = 2000
        seed = 17
        grid_points = 32
        observables = cos1, sin1
        histogram_bins = 8
        bootstrap_resamples = 20
    )");
    kv.set("output_dir", out.string());
    return ExperimentConfig::from_config(kv);
}
}  // namespace

TEST(Config, ParsesCommentsAndLists)
{
    auto const kv = KeyValueConfig::parse("# header\n a = 1.5 # trailing\nlist=1, 2 ,3\n"
                                          "name = cos1\nflag = true\n");
    EXPECT_DOUBLE_EQ(kv.get_double("a"), 1.5);
    EXPECT_EQ(kv.get_ints("list"), (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(kv.get_string("name"), "cos1");
    EXPECT_TRUE(kv.get_bool("flag", false));
    EXPECT_EQ(kv.get_int("missing", 7), 7);
}

TEST(Config, RejectsMalformedInput)
{
    EXPECT_THROW(KeyValueConfig::parse("a = 1\na = 2\n"), std::invalid_argument);
    EXPECT_THROW(KeyValueConfig::parse("no equals sign\n"), std::invalid_argument);
    auto const kv = KeyValueConfig::parse("a = 1x\nb = 2.5\n");
    EXPECT_THROW(kv.get_double("a"), std::invalid_argument);
    EXPECT_THROW(kv.get_int("b"), std::invalid_argument);
    EXPECT_THROW(kv.get_double("c"), std::invalid_argument);
}

TEST(Config, HashIgnoresLayout)
{
    auto const a = KeyValueConfig::parse("x = 1\ny = 2\n");
    auto const b = KeyValueConfig::parse("# comment\ny=2\n\n   x   =   1\n");
    auto const c = KeyValueConfig::parse("x = 1\ny = 3\n");
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_NE(a.hash(), c.hash());
    EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Config, DerivedSeedsDiffer)
{
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
}

TEST(Config, ValidatesExperiment)
{
    auto cfg = small_config({});
    EXPECT_NO_THROW(cfg.validate());
    auto low_n = cfg;
    low_n.n_list = {1, 10};
    EXPECT_THROW(low_n.validate(), std::invalid_argument);
    auto floor_hit = cfg;
    floor_hit.initial_cos = {0.9995};
    EXPECT_THROW(floor_hit.validate(), std::invalid_argument);
    auto bad_time = cfg;
    bad_time.output_times = {0.2};
    EXPECT_THROW(bad_time.validate(), std::invalid_argument);
}

TEST(Config, InitialDensityHasUnitMass)
{
    auto cfg = small_config({});
    cfg.initial_sin = {0.1, 0.2};
    EXPECT_TRUE(is_probability_density(cfg.initial_density(), 1e-12));
    cfg.dim = 2;
    auto const f2 = cfg.initial_density();
    EXPECT_EQ(f2.grid().dim(), 2);
    EXPECT_TRUE(is_probability_density(f2, 1e-12));
}

TEST(RateFit, ExactPowerLaws)
{
    std::vector<std::pair<double, double>> inv, inv2;
    for (double n : {100.0, 200.0, 400.0, 800.0})
    {
        inv.emplace_back(n, 3.0 / n);
        inv2.emplace_back(n, 3.0 / (n * n));
    }
    EXPECT_NEAR(fit_rate(inv).slope, -1.0, 5e-4);
    EXPECT_NEAR(fit_rate(inv2).slope, -2.0, 5e-4);
    EXPECT_NEAR(fit_rate(inv).slope_se, 0.0, 1e-12);
    EXPECT_NEAR(std::exp(fit_rate(inv).intercept), 3.0, 1e-12);
}

TEST(RateFit, NoisyInverseLaw)
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<std::pair<double, double>> pts;
    for (double n : {100.0, 200.0, 400.0, 800.0, 1600.0})
        pts.emplace_back(n, 2.0 / n * (1 + noise(rng)));
    auto const fit = fit_rate(pts);
    EXPECT_NEAR(fit.slope, -1.0, 0.1);
    EXPECT_GT(fit.slope_se, 0.0);
}

TEST(RateFit, RejectsBadPoints)
{
    EXPECT_THROW(fit_rate({{1, 1}, {2, 0.5}}), std::invalid_argument);
    EXPECT_THROW(fit_rate({{1, 1}, {2, 0.0}, {3, 0.2}}), std::invalid_argument);
}

TEST(Observables, Names)
{
    double const x = 0.125;
    std::span<double const> p(&x, 1);
    EXPECT_NEAR(named_observable("cos1")(p), std::cos(2 * M_PI * x), 1e-15);
    EXPECT_NEAR(named_observable("sin3")(p), std::sin(6 * M_PI * x), 1e-15);
    EXPECT_THROW(named_observable("tan1"), std::invalid_argument);
    EXPECT_THROW(named_observable("cos0"), std::invalid_argument);
    EXPECT_THROW(named_observable("cos1x"), std::invalid_argument);
}

TEST(RateExperiment, FreeParticlesHaveNoBias)
{
    auto const dir = scratch_dir("free");
    auto cfg = small_config(dir);
    cfg.chi_squared = false;
    auto const result = run_rate_experiment(cfg);
    ASSERT_TRUE(result.completed) << result.failure_message;
    EXPECT_EQ(result.rows.size(), 3u * 2 * 2 * 2);
    for (auto const& row : result.rows)
    {
        EXPECT_EQ(row.prediction, 0.0);
        EXPECT_LE(std::abs(row.estimate), 4 * row.se) << row.observable << " N=" << row.n_particles;
    }
    EXPECT_TRUE(fs::exists(dir / "rates.csv"));
    EXPECT_FALSE(fs::exists(dir / "failure.json"));
    fs::remove_all(dir);
}

TEST(RateExperiment, FixedSeedGivesIdenticalBytes)
{
    auto const a = scratch_dir("det_a");
    auto const b = scratch_dir("det_b");
    auto cfg = small_config(a);
    cfg.kernel = KernelSpec({{1, 0, 0.3}}, {{1, 0, -0.7}});
    cfg.n_list = {5, 10};
    cfg.replicas = 300;
    cfg.chi_squared = false;
    ASSERT_TRUE(run_rate_experiment(cfg).completed);
    cfg.output_dir = b.string();
    ASSERT_TRUE(run_rate_experiment(cfg).completed);
    auto const csv = slurp(a / "rates.csv");
    EXPECT_EQ(csv, slurp(b / "rates.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), rate_csv_header);
    auto const manifest = slurp(a / "manifest.json");
    EXPECT_NE(manifest.find(cfg.config_hash), std::string::npos);
    EXPECT_NE(manifest.find("\"seeds\""), std::string::npos);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(RateExperiment, FailureKeepsPartialRows)
{
    auto const dir = scratch_dir("fail");
    auto cfg = small_config(dir);
    cfg.histogram_bins = 7;  // does not divide the grid
    auto const result = run_rate_experiment(cfg);
    EXPECT_FALSE(result.completed);
    EXPECT_EQ(result.failed_stage, "simulate N=5");
    EXPECT_FALSE(result.rows.empty());
    EXPECT_TRUE(fs::exists(dir / "failure.json"));
    EXPECT_TRUE(fs::exists(dir / "rates.csv"));
    EXPECT_NE(slurp(dir / "failure.json").find("simulate N=5"), std::string::npos);
    fs::remove_all(dir);
}

TEST(BoundsReport, DefaultLatticePasses)
{
    BoundsReportOptions opts;
    auto const report = run_bounds_report(opts);
    for (auto const& c : report.checks)
        EXPECT_TRUE(c.pass()) << c.summary();
    EXPECT_EQ(report.checks.size(), 5u);
    EXPECT_TRUE(report.all_pass());
}

TEST(BoundsReport, FaultInjectionDetected)
{
    BoundsReportOptions opts;
    opts.lattice.beta_values = {1.0};
    opts.fault_injection = 1e-3;
    EXPECT_FALSE(run_bounds_report(opts).all_pass());
}

TEST(BoundsReport, EmptyLattice)
{
    BoundsReportOptions opts;
    opts.lattice.t_values.clear();
    try
    {
        run_bounds_report(opts);
        FAIL() << "expected an error";
    }
    catch (std::invalid_argument const& e)
    {
        EXPECT_STREQ(e.what(), "no lattice points");
    }
}

TEST(BoundsReport, WritesCsvAndSummary)
{
    auto const dir = scratch_dir("bounds");
    BoundsReportOptions opts;
    opts.lattice.j_values = {1};
    opts.lattice.ell_max = 4;
    opts.lattice.beta_values = {1.0};
    opts.output_dir = dir.string();
    run_bounds_report(opts);
    EXPECT_TRUE(fs::exists(dir / "bounds.csv"));
    auto const summary = slurp(dir / "bounds_summary.txt");
    EXPECT_NE(summary.find("PASS poly_bound"), std::string::npos);
    fs::remove_all(dir);
}
