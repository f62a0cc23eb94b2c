// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "chaoslab/metrics/cumulant.hpp"
#include "chaoslab/metrics/divergence.hpp"
#include "chaoslab/particles/simulator.hpp"

using namespace chaoslab;

namespace
{
constexpr double two_pi = 2 * std::numbers::pi;

GridField one_particle(int m, double a, double b = 0, int mode = 1)
{
    return GridField::from_function(TorusGrid(1, m), [=](double x) {
        return 1 + a * std::cos(two_pi * x) + b * std::sin(two_pi * mode * x);
    });
}

//! Random smooth positive density on (T^1)^j built from a few modes
GridField random_density(std::mt19937_64& rng, int m, int j)
{
    std::uniform_real_distribution<double> u(-0.15, 0.15);
    GridField f(TorusGrid(1, m), j);
    std::vector<std::array<double, 3>> terms;
    for (int t = 0; t < 4; ++t)
        terms.push_back({u(rng), u(rng), static_cast<double>(1 + t % 2)});
    std::size_t const total = f.size();
    for (std::size_t n = 0; n < total; ++n)
    {
        std::size_t rest = n;
        double v = 1;
        double phase = 0;
        for (int a = j - 1; a >= 0; --a)
        {
            double const x = static_cast<double>(rest % m) / m;
            rest /= m;
            phase += (a + 1) * x;
        }
        for (auto const& [c, s, k] : terms)
            v += c * std::cos(two_pi * k * phase) + s * std::sin(two_pi * k * phase);
        f[n] = v;
    }
    f *= 1 / quadrature(f);
    return f;
}

MarginalSamples singles(std::vector<double> const& x, int per_replica)
{
    MarginalSamples s;
    s.j = 1;
    s.points = x;
    for (std::size_t n = 0; n < x.size(); ++n)
        s.replica_of.push_back(static_cast<int>(n / per_replica));
    return s;
}

GridField marginalize_last(GridField const& f)
{
    return integrate_coordinate(f, f.arity() - 1);
}
}  // namespace

TEST(WeightedL2, Zero)
{
    auto const rho = one_particle(32, 0.3);
    EXPECT_EQ(weighted_l2_error(GridField(rho.grid(), 2), rho), 0.0);
}

TEST(WeightedL2, CosineOnUniform)
{
    double const eps = 0.01;
    auto const rho = one_particle(32, 0.0);
    auto gamma = one_particle(32, eps);
    gamma -= rho;
    EXPECT_NEAR(weighted_l2_error(gamma, rho), eps * eps / 2, 1e-15);
}

TEST(WeightedL2, ConstantRatio)
{
    auto const rho = one_particle(16, 0.4, 0.2);
    for (int j = 1; j <= 3; ++j)
    {
        auto const gamma = 0.3 * tensor_power(rho, j);
        EXPECT_NEAR(weighted_l2_error(gamma, rho), 0.09, 1e-12);
    }
}

TEST(WeightedL2, RejectsNonPositiveReference)
{
    auto rho = one_particle(16, 0.4);
    rho[2] = 0;
    EXPECT_THROW(weighted_l2_error(rho, rho), std::invalid_argument);
}

TEST(WeightedL2, MonotoneUnderMarginalization)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial)
    {
        auto const f3 = random_density(rng, 16, 3);
        auto const f2 = marginalize_last(f3);
        auto const f1 = marginalize_last(f2);
        double const e1 = weighted_l2_error(f1 - tensor_power(f1, 1), f1);
        double const e2 = weighted_l2_error(f2 - tensor_power(f1, 2), f1);
        double const e3 = weighted_l2_error(f3 - tensor_power(f1, 3), f1);
        EXPECT_LE(e1, e2 + 1e-14);
        EXPECT_LE(e2, e3 + 1e-14);
    }
}

TEST(GridDivergence, EqualDensities)
{
    auto const p = one_particle(32, 0.4);
    EXPECT_EQ(chi_squared_grid(p, p), 0.0);
    EXPECT_EQ(relative_entropy_grid(p, p), 0.0);
    EXPECT_EQ(total_variation_grid(p, p), 0.0);
}

TEST(GridDivergence, PinskerChain)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial)
    {
        int const j = 1 + trial % 2;
        auto const p = random_density(rng, 16, j);
        auto const q = random_density(rng, 16, j);
        double const tv = total_variation_grid(p, q);
        double const re = relative_entropy_grid(p, q);
        double const chi = chi_squared_grid(p, q);
        EXPECT_GE(tv, 0.0);
        EXPECT_LE(tv, 1.0);
        EXPECT_LE(tv * tv, re / 2 + 1e-15);
        EXPECT_LE(re, chi + 1e-15);
    }
}

TEST(GridDivergence, DataProcessing)
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial)
    {
        auto const p = random_density(rng, 16, 2);
        auto const r = random_density(rng, 16, 1);
        auto const q = tensor_power(r, 2);
        auto const pm = marginalize_last(p);
        auto const qm = marginalize_last(q);
        EXPECT_LE(chi_squared_grid(pm, qm), chi_squared_grid(p, q) + 1e-14);
        EXPECT_LE(relative_entropy_grid(pm, qm),
                  relative_entropy_grid(p, q) + 1e-14);
        EXPECT_LE(total_variation_grid(pm, qm),
                  total_variation_grid(p, q) + 1e-14);
    }
}

TEST(GridDivergence, SupportViolation)
{
    auto const p = one_particle(16, 0.4);
    auto q = p;
    q[3] = 0;
    EXPECT_THROW(relative_entropy_grid(p, q), std::invalid_argument);
}

TEST(Histogram, CellMassesSumToOne)
{
    std::mt19937_64 rng(1);
    auto const f = random_density(rng, 16, 2);
    auto const q = cell_masses(f, 4);
    ASSERT_EQ(q.size(), 16u);
    double s = 0;
    for (double v : q)
        s += v;
    EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_THROW(cell_masses(f, 5), std::invalid_argument);
}

TEST(Histogram, CellOfOrdersCoordinateZeroSlowest)
{
    std::vector<double> t{0.3, 0.9};
    EXPECT_EQ(cell_of(t, 4), 1u * 4 + 3);
}

TEST(Histogram, NullCase)
{
    auto const ref = one_particle(64, 0.5);
    auto const x = sample_initial(ref, 100000, Philox4x32::make_key(8, 0));
    HistogramOptions opts;
    opts.bins = 16;
    opts.seed = 3;
    auto const est = chi_squared_from_samples(singles(x, 10), ref, opts);
    EXPECT_GT(est.standard_error, 0.0);
    EXPECT_NEAR(est.estimate, 0.0, 4 * est.standard_error);
    EXPECT_NEAR(est.bias, 15.0 / 100000, 1e-15);
}

TEST(Histogram, BinnedOracle)
{
    auto const uniform = one_particle(64, 0.0);
    auto const bump = one_particle(64, 0.5);
    double const oracle = binned_chi_squared(bump, uniform, 32);
    // Binning attenuates 0.125 by sinc^2(pi/32); the linear interpolant of
    // the grid cosine by sinc^4(pi/64).
    auto sinc = [](double a) { return std::sin(a) / a; };
    double const atten = std::pow(sinc(std::numbers::pi / 32), 2)
                         * std::pow(sinc(std::numbers::pi / 64), 4);
    EXPECT_NEAR(oracle, 0.125 * atten, 1e-6);
    auto const x = sample_initial(bump, 200000, Philox4x32::make_key(9, 0));
    HistogramOptions opts;
    opts.bins = 32;
    auto const est = chi_squared_from_samples(singles(x, 20), uniform, opts);
    EXPECT_NEAR(est.estimate, oracle, 4 * est.standard_error);
}

TEST(Histogram, RejectsEmptyReferenceCells)
{
    auto ref = GridField::from_function(TorusGrid(1, 16), [](double x) {
        return x < 0.5 ? 2.0 : 0.0;
    });
    std::vector<double> x(10000, 0.25);
    HistogramOptions opts;
    opts.bins = 4;
    EXPECT_THROW(chi_squared_from_samples(singles(x, 1), ref, opts),
                 std::invalid_argument);
}

TEST(Histogram, ReportChainAndJson)
{
    auto const uniform = one_particle(64, 0.0);
    auto const bump = one_particle(64, 0.5);
    auto const x = sample_initial(bump, 100000, Philox4x32::make_key(2, 0));
    HistogramOptions opts;
    opts.bins = 16;
    auto const r = divergence_from_samples(singles(x, 10), uniform, opts);
    EXPECT_EQ(r.n_samples, 100000u);
    EXPECT_EQ(r.n_replicas, 10000u);
    double const slack = 4 * (r.se_total_variation + r.se_relative_entropy
                              + r.se_chi_squared);
    EXPECT_LE(r.total_variation * r.total_variation,
              r.relative_entropy / 2 + slack);
    EXPECT_LE(r.relative_entropy / 2, r.chi_squared / 2 + slack);
    auto const j = nlohmann::json::parse(r.to_json());
    for (char const* key :
         {"chi_squared", "relative_entropy", "total_variation", "se_chi_squared",
          "se_relative_entropy", "se_total_variation", "bins", "n_samples",
          "n_replicas"})
        EXPECT_TRUE(j.contains(key)) << key;
    auto const back = DivergenceReport::from_json(r.to_json());
    EXPECT_EQ(back.chi_squared, r.chi_squared);
    EXPECT_EQ(back.n_replicas, r.n_replicas);
}

TEST(Cumulant, SecondOrderIsSampleCovariance)
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    MarginalSamples s;
    s.j = 2;
    int const n = 500;
    for (int i = 0; i < n; ++i)
    {
        double const a = u(rng);
        s.points.push_back(a);
        s.points.push_back(std::fmod(a + 0.3 * u(rng), 1.0));
        s.replica_of.push_back(i);
    }
    auto const phi = fourier_observable(1, 1, 0);
    auto const psi = fourier_observable(1, 0.5, 0.2);
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i)
    {
        mx += phi(s.tuple(i).subspan(0, 1)) / n;
        my += psi(s.tuple(i).subspan(1, 1)) / n;
    }
    double cov = 0;
    for (int i = 0; i < n; ++i)
        cov += (phi(s.tuple(i).subspan(0, 1)) - mx)
               * (psi(s.tuple(i).subspan(1, 1)) - my);
    cov /= n - 1;
    auto const k = joint_cumulant(s, {phi, psi});
    EXPECT_NEAR(k.estimate, cov, 1e-13);
    EXPECT_GT(k.standard_error, 0.0);
}

TEST(Cumulant, FirstOrderIsMean)
{
    std::vector<double> x{0.1, 0.2, 0.7};
    auto const k = joint_cumulant(singles(x, 1), {fourier_observable(1, 1, 0)});
    double const m = (std::cos(two_pi * 0.1) + std::cos(two_pi * 0.2)
                      + std::cos(two_pi * 0.7)) / 3;
    EXPECT_NEAR(k.estimate, m, 1e-15);
}

TEST(Cumulant, IndependentCoordinatesVanish)
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0, 1);
    for (int j = 2; j <= 4; ++j)
    {
        MarginalSamples s;
        s.j = j;
        for (int i = 0; i < 20000; ++i)
        {
            for (int a = 0; a < j; ++a)
                s.points.push_back(std::pow(u(rng), 1.5));
            s.replica_of.push_back(i);
        }
        std::vector<Observable> phis(j, fourier_observable(1, 1, 0.5));
        auto const k = joint_cumulant(s, phis);
        EXPECT_NEAR(k.estimate, 0.0, 4 * k.standard_error) << j;
    }
}

TEST(Cumulant, Multilinear)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    for (int j = 2; j <= 4; ++j)
    {
        MarginalSamples s;
        s.j = j;
        for (int i = 0; i < 300; ++i)
        {
            double const base = u(rng);
            for (int a = 0; a < j; ++a)
                s.points.push_back(std::fmod(base + 0.2 * u(rng), 1.0));
            s.replica_of.push_back(i);
        }
        auto const phi = fourier_observable(1, 1, 0.3);
        Observable scaled = [&](std::span<double const> x) {
            return 2.5 * phi(x) - 7.0;
        };
        std::vector<Observable> plain(j, phi);
        auto changed = plain;
        changed[0] = scaled;
        double const k0 = joint_cumulant(s, plain).estimate;
        double const k1 = joint_cumulant(s, changed).estimate;
        EXPECT_NEAR(k1, 2.5 * k0, 1e-9 * (1 + std::abs(k0))) << j;
    }
}

TEST(Cumulant, RejectsTooFewReplicas)
{
    MarginalSamples s;
    s.j = 3;
    s.points = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    s.replica_of = {0, 1};
    std::vector<Observable> phis(3, fourier_observable(1, 1, 0));
    EXPECT_THROW(joint_cumulant(s, phis), std::invalid_argument);
    EXPECT_THROW(joint_cumulant(s, {}), std::invalid_argument);
}

TEST(Cumulant, GridObservableInterpolates)
{
    auto const f = one_particle(64, 1.0);
    auto const phi = grid_observable(f);
    std::vector<double> x{0.0};
    EXPECT_NEAR(phi(x), 2.0, 1e-15);
    x[0] = 0.5 / 64;
    EXPECT_NEAR(phi(x), 1 + 0.5 * (1 + std::cos(two_pi / 64)), 1e-15);
}

TEST(Exchangeable, PairCumulantShiftInvariant)
{
    SimConfig cfg;
    cfg.n_particles = 20;
    cfg.n_replicas = 50;
    cfg.initial_density = one_particle(32, 0.5);
    auto const ens = make_ensemble(cfg);
    auto const phi = fourier_observable(1, 1, 0);
    Observable shifted = [&](std::span<double const> x) { return phi(x) + 3; };
    auto const a = exchangeable_pair_cumulant(replica_sums(ens, phi));
    auto const b = exchangeable_pair_cumulant(replica_sums(ens, shifted));
    EXPECT_NEAR(a.estimate, b.estimate, 1e-12);
}

TEST(Exchangeable, IndependentParticles)
{
    SimConfig cfg;
    cfg.n_particles = 50;
    cfg.n_replicas = 2000;
    cfg.initial_density = one_particle(32, 0.5);
    auto const ens = make_ensemble(cfg);
    auto const sums = replica_sums(ens, fourier_observable(1, 1, 0));
    auto const k = exchangeable_pair_cumulant(sums);
    EXPECT_NEAR(k.estimate, 0.0, 4 * k.standard_error);
    auto const m = exchangeable_mean(sums);
    EXPECT_NEAR(m.estimate, 0.25, 4 * m.standard_error);
}
