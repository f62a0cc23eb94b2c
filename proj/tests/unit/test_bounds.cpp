// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "chaoslab/bounds/cascade.hpp"
#include "chaoslab/bounds/integrals.hpp"

using namespace chaoslab;

namespace
{
/*!
 * I^l_j(t) is the probability that a pure-birth chain with rates beta k
 * started at j reaches j + l by time t. The count of births is negative
 * binomial, so I^l_j(t) = I_x(l, j) with x = 1 - e^{-beta t}.
 */
double yule_oracle(int ell, int j, double beta, double t)
{
    if (ell == 0)
        return 1;
    return boost::math::ibeta(static_cast<double>(ell), static_cast<double>(j),
                              -std::expm1(-beta * t));
}

BoundCascade cascade(int j, int ell, double beta, double t, double n_particles,
                     std::vector<double> r)
{
    BoundCascade bc;
    bc.beta = beta;
    bc.j = j;
    bc.ell = ell;
    bc.t = t;
    bc.alpha = mean_field_alpha(n_particles, j, ell + 1);
    r.resize(ell + 1, 0.0);
    bc.r = std::move(r);
    return bc;
}
}  // namespace

TEST(Integrals, OrderZeroIsOne)
{
    EXPECT_EQ(eval_I(0, 3, 2.0, 1.5), 1.0);
}

TEST(Integrals, OrderOneClosedForm)
{
    for (int j : {1, 3, 10})
        for (double t : {0.05, 0.7, 2.0})
            EXPECT_NEAR(eval_I(1, j, 1.3, t), -std::expm1(-1.3 * j * t), 1e-10);
}

TEST(Integrals, ZeroTime)
{
    for (int ell : {1, 2, 7})
        EXPECT_EQ(eval_I(ell, 2, 1.0, 0.0), 0.0);
}

TEST(Integrals, MatchesBirthProcessOracle)
{
    for (double beta : {0.5, 4.0})
        for (double t : {0.1, 1.0, 3.0})
        {
            ExponentialIntegrals const table(beta, t, 40);
            EXPECT_LE(table.achieved_error(), integral_tolerance);
            for (int j : {1, 4, 16})
                for (int ell : {1, 2, 5, 11, 24})
                {
                    double const want = yule_oracle(ell, j, beta, t);
                    EXPECT_NEAR(table.at_horizon(ell, j), want, 1e-8 * want)
                        << beta << " " << t << " " << j << " " << ell;
                }
        }
}

TEST(Integrals, RecurrenceResidual)
{
    double const beta = 1.0, t = 1.0;
    ExponentialIntegrals const table(beta, t, 20);
    for (int j : {1, 4})
        for (int ell : {0, 3, 9})
        {
            double const lambda = beta * j;
            auto integrand = [&](double s) {
                return std::exp(-lambda * (t - s)) * yule_oracle(ell, j + 1, beta, s);
            };
            double const rhs = lambda
                               * boost::math::quadrature::gauss_kronrod<double, 31>::
                                   integrate(integrand, 0.0, t, 15, 1e-14);
            EXPECT_LE(std::abs(table.at_horizon(ell + 1, j) - rhs), 1e-6);
        }
}

TEST(Integrals, PolyBoundArithmetic)
{
    EXPECT_DOUBLE_EQ(poly_bound(3, 1, 3, 2.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(poly_bound(9, 1, 1, 2.0, 0.0), 0.2);
    EXPECT_THROW(poly_bound(1, 1, 0, 1.0, 1.0), std::invalid_argument);
}

TEST(Integrals, ExpBoundHypothesis)
{
    auto const b = exp_bound(100, 10, 1.0, 0.0);
    ASSERT_TRUE(b.has_value());
    double const delta = std::exp(-1.0) / 3;
    EXPECT_NEAR(delta * 100, 12.26, 0.01);
    EXPECT_DOUBLE_EQ(*b, std::exp(-delta * 100));
    EXPECT_FALSE(exp_bound(10, 10, 1.0, 0.0).has_value());
    EXPECT_FALSE(exp_bound(100, 13, 1.0, 0.0).has_value());
}

TEST(Integrals, LatticeBoundsHold)
{
    LatticeSpec spec;
    spec.beta_values = {1.0};
    auto const rows = evaluate_lattice(spec);
    EXPECT_EQ(rows.size(), 3u * 64 * 3 * 3);
    int with_exp = 0;
    for (auto const& r : rows)
    {
        EXPECT_GE(r.value, 0.0);
        EXPECT_LE(r.value, 1.0);
        EXPECT_LE(r.value, r.poly_bound);
        if (r.exp_bound)
        {
            ++with_exp;
            EXPECT_LE(r.value, *r.exp_bound);
        }
        EXPECT_GE(r.margin, 0.0);
    }
    EXPECT_GT(with_exp, 0);
}

TEST(Integrals, LatticeCsv)
{
    LatticeSpec spec;
    spec.j_values = {1};
    spec.ell_max = 2;
    spec.b_values = {1};
    spec.t_values = {0.5};
    spec.beta_values = {1};
    auto const path = std::filesystem::temp_directory_path() / "chaoslab_lattice.csv";
    write_lattice_csv(evaluate_lattice(spec), path.string());
    std::ifstream is(path);
    std::string header;
    std::getline(is, header);
    EXPECT_EQ(header, "j,ell,beta,t,I,poly_b,poly_bound,exp_bound,margin");
    int lines = 0;
    for (std::string line; std::getline(is, line);)
        ++lines;
    EXPECT_EQ(lines, 2);
    std::filesystem::remove(path);
}

TEST(Cascade, ZeroInputs)
{
    auto const bc = cascade(2, 5, 1.0, 1.0, 100, {});
    EXPECT_EQ(cascade_bound(bc, 0.0), 0.0);
}

TEST(Cascade, SingleForcing)
{
    double const beta = 2.0, t = 0.7;
    int const j = 3;
    auto const bc = cascade(j, 1, beta, t, 50, {0.4});
    EXPECT_NEAR(cascade_bound(bc, 0.0),
                -std::expm1(-beta * j * t) * 0.4 / (beta * j), 1e-10);
}

TEST(Cascade, RejectsMissingSequences)
{
    BoundCascade bc;
    bc.ell = 3;
    bc.alpha = {1, 1};
    bc.r = {0, 0, 0};
    EXPECT_THROW(cascade_bound(bc, 1.0), std::invalid_argument);
}

TEST(Cascade, LogSpaceProduct)
{
    auto const bc = cascade(2, 4, 1.0, 1.0, 10, {});
    double prod = 1;
    for (int k = 2; k < 6; ++k)
        prod *= 1 + k * k / 100.0;
    EXPECT_NEAR(std::exp(bc.log_a(4)), prod, 1e-14);
    EXPECT_EQ(bc.log_a(0), 0.0);
}

TEST(Cascade, DirectIntegrationStaysBelow)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0, 1);
    for (int j : {1, 3})
        for (int ell : {1, 4, 9})
            for (double t : {0.2, 1.0})
            {
                std::vector<double> r(ell + 1);
                for (auto& v : r)
                    v = u(rng);
                auto bc = cascade(j, ell, 1.5, t, 20, r);
                double const tail = 2 * u(rng);
                auto const traj = integrate_hierarchy(bc, tail, j + ell - 1);
                double const x = traj.levels[0].back();
                double const bound = cascade_bound(bc, tail);
                EXPECT_LE(x, bound * (1 + 1e-6));
                EXPECT_NEAR(x, bound, 1e-8 * bound);
                bc.t0 = 0.4 * t;
                EXPECT_LE(x, cascade_bound(bc, tail, tail) * (1 + 1e-6));
            }
}

TEST(Hierarchy, ZeroForcing)
{
    auto const bc = cascade(1, 3, 1.0, 1.0, 10, {});
    auto const traj = integrate_hierarchy(bc, 0.0, 3);
    for (auto const& level : traj.levels)
        for (double v : level)
            EXPECT_EQ(v, 0.0);
}

TEST(Hierarchy, SingleLevelClosedForm)
{
    BoundCascade bc;
    bc.beta = 1.7;
    bc.j = 2;
    bc.t = 1.2;
    bc.alpha = {1.0};
    bc.r = {0.8};
    auto const traj = integrate_hierarchy(bc, 0.0, 2, 7);
    for (std::size_t n = 0; n < traj.times.size(); ++n)
    {
        double const s = traj.times[n];
        EXPECT_NEAR(traj.levels[0][n], 0.8 / (1.7 * 2) * -std::expm1(-1.7 * 2 * s),
                    1e-13);
    }
}

TEST(Hierarchy, MonotoneInClosure)
{
    auto const bc = cascade(1, 5, 1.0, 1.0, 10, {0.1, 0.2, 0.0, 0.3, 0.1});
    auto const low = integrate_hierarchy(bc, 0.5, 5);
    auto const high = integrate_hierarchy(bc, 1.5, 5);
    for (std::size_t m = 0; m < low.levels.size(); ++m)
        for (std::size_t n = 0; n < low.times.size(); ++n)
            EXPECT_LE(low.levels[m][n], high.levels[m][n]);
}

TEST(Hierarchy, RejectsBadLevels)
{
    auto const bc = cascade(3, 2, 1.0, 1.0, 10, {});
    EXPECT_THROW(integrate_hierarchy(bc, 0.0, 2), std::invalid_argument);
    EXPECT_THROW(integrate_hierarchy(bc, 0.0, 10), std::invalid_argument);
}
