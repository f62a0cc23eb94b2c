// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/metrics/cumulant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chaoslab/partition/partition.hpp"

namespace chaoslab
{
namespace
{
//! Power sums P[S] = sum_s prod_{i in S} Y_i(s) indexed by subset bitmask
using PowerSums = std::vector<double>;

//! Bitmask of the union of the given blocks
unsigned block_mask(std::vector<std::vector<int>> const& blocks,
                    std::vector<int> const& members)
{
    unsigned mask = 0;
    for (int b : members)
        for (int e : blocks[b])
            mask |= 1u << e;
    return mask;
}

double falling(double n, int m)
{
    double f = 1;
    for (int k = 0; k < m; ++k)
        f *= n - k;
    return f;
}

/*!
 * U-statistic estimate of prod_B E[prod_{i in B} Y_i] over distinct draws,
 * by Moebius inversion of the unrestricted sums.
 */
double distinct_product(std::vector<std::vector<int>> const& blocks,
                        PowerSums const& p, double n)
{
    int const m = static_cast<int>(blocks.size());
    double total = 0;
    for (auto const& sigma : enumerate_partitions(m))
    {
        double term = 1;
        for (auto const& c : sigma.blocks())
            term *= static_cast<double>(mobius_weight(static_cast<int>(c.size())))
                    * p[block_mask(blocks, c)];
        total += term;
    }
    return total / falling(n, m);
}

double cumulant_from_power_sums(int j, PowerSums const& p, double n)
{
    double k = 0;
    for (auto const& pi : enumerate_partitions(j))
        k += static_cast<double>(mobius_weight(pi))
             * distinct_product(pi.blocks(), p, n);
    return k;
}

}  // namespace

Observable fourier_observable(int mode, double cos_coeff, double sin_coeff)
{
    return [=](std::span<double const> x) {
        double const a = 2 * std::numbers::pi * mode * x[0];
        return cos_coeff * std::cos(a) + sin_coeff * std::sin(a);
    };
}

Observable grid_observable(GridField const& field)
{
    if (field.arity() != 1 || field.grid().dim() != 1)
        throw std::invalid_argument("grid observables are one-particle d=1");
    return [field](std::span<double const> x) {
        int const m = field.grid().points();
        double const g = (x[0] - std::floor(x[0])) * m;
        int const i0 = static_cast<int>(g) % m;
        double const t = g - std::floor(g);
        return (1 - t) * field[i0] + t * field[(i0 + 1) % m];
    };
}

SampleEstimate joint_cumulant(MarginalSamples const& samples,
                              std::vector<Observable> const& phis)
{
    int const j = static_cast<int>(phis.size());
    if (j < 1 || j > max_cumulant_order)
        throw std::invalid_argument("joint cumulants need 1 <= j <= 4");
    if (samples.j != j)
        throw std::invalid_argument("one observable per tuple coordinate");
    int n_rep = 0;
    for (int r : samples.replica_of)
        n_rep = std::max(n_rep, r + 1);
    if (n_rep < j || static_cast<int>(samples.size()) < j)
        throw std::invalid_argument("fewer replicas than the cumulant order");

    // Replicas fall into at most 50 jackknife groups.
    int const groups = std::min(n_rep, 50);
    std::size_t const subsets = std::size_t{1} << j;
    std::vector<PowerSums> by_group(groups, PowerSums(subsets, 0.0));
    std::vector<double> count(groups, 0.0);
    std::vector<double> y(j);
    for (std::size_t s = 0; s < samples.size(); ++s)
    {
        auto const t = samples.tuple(s);
        for (int a = 0; a < j; ++a)
            y[a] = phis[a](t.subspan(static_cast<std::size_t>(a) * samples.dim,
                                     samples.dim));
        int const g = static_cast<int>(
            static_cast<long long>(samples.replica_of[s]) * groups / n_rep);
        auto& p = by_group[g];
        for (std::size_t mask = 0; mask < subsets; ++mask)
        {
            double prod = 1;
            for (int a = 0; a < j; ++a)
                if (mask & (std::size_t{1} << a))
                    prod *= y[a];
            p[mask] += prod;
        }
        count[g] += 1;
    }
    PowerSums total(subsets, 0.0);
    double n = 0;
    for (int g = 0; g < groups; ++g)
    {
        for (std::size_t mask = 0; mask < subsets; ++mask)
            total[mask] += by_group[g][mask];
        n += count[g];
    }
    SampleEstimate out;
    out.estimate = cumulant_from_power_sums(j, total, n);
    if (groups < 2)
        return out;
    std::vector<double> loo(groups);
    double mean = 0;
    for (int g = 0; g < groups; ++g)
    {
        PowerSums p = total;
        for (std::size_t mask = 0; mask < subsets; ++mask)
            p[mask] -= by_group[g][mask];
        loo[g] = cumulant_from_power_sums(j, p, n - count[g]);
        mean += loo[g] / groups;
    }
    double v = 0;
    for (double l : loo)
        v += (l - mean) * (l - mean);
    out.standard_error = std::sqrt(v * (groups - 1) / groups);
    return out;
}

ReplicaSums replica_sums(ParticleEnsemble const& ens, Observable const& phi)
{
    ReplicaSums out;
    out.n_particles = ens.n_particles;
    out.sum.resize(ens.n_replicas);
    out.sum_square.resize(ens.n_replicas);
    for (int r = 0; r < ens.n_replicas; ++r)
    {
        auto const x = ens.replica(r);
        double s = 0, q = 0;
        for (int p = 0; p < ens.n_particles; ++p)
        {
            double const v = phi(x.subspan(static_cast<std::size_t>(p) * ens.dim,
                                           ens.dim));
            s += v;
            q += v * v;
        }
        out.sum[r] = s;
        out.sum_square[r] = q;
    }
    return out;
}

SampleEstimate exchangeable_mean(ReplicaSums const& sums)
{
    std::size_t const r = sums.sum.size();
    if (r < 2 || sums.n_particles < 1)
        throw std::invalid_argument("need at least two replicas");
    double m = 0;
    for (double s : sums.sum)
        m += s / sums.n_particles;
    m /= static_cast<double>(r);
    double v = 0;
    for (double s : sums.sum)
    {
        double const d = s / sums.n_particles - m;
        v += d * d;
    }
    v /= static_cast<double>(r - 1);
    return {m, std::sqrt(v / static_cast<double>(r)), 0.0};
}

SampleEstimate exchangeable_pair_cumulant(ReplicaSums const& sums)
{
    std::size_t const r = sums.sum.size();
    double const n = sums.n_particles;
    if (r < 3 || sums.n_particles < 2)
        throw std::invalid_argument("pair cumulant needs N >= 2 and R >= 3");
    double const rr = static_cast<double>(r);
    std::vector<double> pair(r), mean(r);
    double a = 0, b = 0, c = 0;
    for (std::size_t i = 0; i < r; ++i)
    {
        pair[i] = (sums.sum[i] * sums.sum[i] - sums.sum_square[i]) / (n * (n - 1));
        mean[i] = sums.sum[i] / n;
        a += pair[i];
        b += mean[i];
        c += mean[i] * mean[i];
    }
    auto kappa = [](double a, double b, double c, double rr) {
        return a / rr - (b * b - c) / (rr * (rr - 1));
    };
    SampleEstimate out;
    out.estimate = kappa(a, b, c, rr);
    std::vector<double> loo(r);
    double avg = 0;
    for (std::size_t i = 0; i < r; ++i)
    {
        loo[i] = kappa(a - pair[i], b - mean[i], c - mean[i] * mean[i], rr - 1);
        avg += loo[i] / rr;
    }
    double v = 0;
    for (double l : loo)
        v += (l - avg) * (l - avg);
    out.standard_error = std::sqrt(v * (rr - 1) / rr);
    return out;
}

}  // namespace chaoslab
