// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/metrics/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace chaoslab
{
namespace
{
void check_same_shape(GridField const& p, GridField const& q)
{
    if (p.arity() != q.arity() || p.grid() != q.grid())
        throw std::invalid_argument("divergence needs fields on one grid");
}

double cell_volume(GridField const& f)
{
    return std::pow(f.grid().spacing(), f.axes());
}

std::size_t cell_count(int bins, int axes)
{
    std::size_t c = 1;
    for (int a = 0; a < axes; ++a)
        c *= static_cast<std::size_t>(bins);
    return c;
}

//! Statistics of one histogram against reference cell masses
struct HistogramStats
{
    double chi_squared = 0;
    double relative_entropy = 0;
    double total_variation = 0;
};

HistogramStats histogram_stats(std::vector<double> const& counts, double n,
                               std::vector<double> const& q)
{
    HistogramStats s;
    for (std::size_t c = 0; c < q.size(); ++c)
    {
        double const p = counts[c] / n;
        double const d = p - q[c];
        s.chi_squared += d * d / q[c];
        if (p > 0)
            s.relative_entropy += p * std::log(p / q[c]);
        s.total_variation += 0.5 * std::abs(d);
    }
    // Null biases of the plug-in chi-squared and entropy.
    double const dof = static_cast<double>(q.size()) - 1;
    s.chi_squared -= dof / n;
    s.relative_entropy -= dof / (2 * n);
    return s;
}

//! Cell indices grouped by replica
struct ReplicaCells
{
    std::vector<std::vector<std::size_t>> cells;
    std::size_t n_samples = 0;
};

ReplicaCells group_cells(MarginalSamples const& samples, int bins)
{
    if (samples.size() == 0)
        throw std::invalid_argument("no samples");
    int const n_rep
        = 1 + *std::max_element(samples.replica_of.begin(), samples.replica_of.end());
    ReplicaCells out;
    out.cells.resize(n_rep);
    for (std::size_t s = 0; s < samples.size(); ++s)
        out.cells[samples.replica_of[s]].push_back(cell_of(samples.tuple(s), bins));
    out.n_samples = samples.size();
    return out;
}

std::vector<double> reference_masses(MarginalSamples const& samples,
                                     GridField const& reference, int bins)
{
    if (reference.arity() != samples.j || reference.grid().dim() != samples.dim)
        throw std::invalid_argument("reference arity does not match samples");
    auto q = cell_masses(reference, bins);
    if (*std::min_element(q.begin(), q.end()) <= 0)
        throw std::invalid_argument("reference has empty histogram cells");
    if (static_cast<double>(q.size()) > static_cast<double>(samples.size()) / 50)
        throw std::invalid_argument("too many histogram cells for the sample "
                                    "count (need B^(d j) <= n / 50)");
    return q;
}

template<class Stat>
std::vector<HistogramStats> bootstrap(ReplicaCells const& rc,
                                      std::vector<double> const& q,
                                      HistogramOptions const& opts, Stat stat)
{
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, rc.cells.size() - 1);
    std::vector<HistogramStats> out;
    std::vector<double> counts(q.size());
    for (int b = 0; b < opts.bootstrap_resamples; ++b)
    {
        std::fill(counts.begin(), counts.end(), 0.0);
        double n = 0;
        for (std::size_t r = 0; r < rc.cells.size(); ++r)
        {
            auto const& cells = rc.cells[pick(rng)];
            for (auto c : cells)
                counts[c] += 1;
            n += static_cast<double>(cells.size());
        }
        if (n > 0)
            out.push_back(stat(counts, n));
    }
    return out;
}

template<class Get>
double spread(std::vector<HistogramStats> const& boots, Get get)
{
    if (boots.size() < 2)
        return 0;
    double m = 0;
    for (auto const& b : boots)
        m += get(b);
    m /= static_cast<double>(boots.size());
    double v = 0;
    for (auto const& b : boots)
        v += (get(b) - m) * (get(b) - m);
    return std::sqrt(v / static_cast<double>(boots.size() - 1));
}

}  // namespace

double weighted_l2_error(GridField const& gamma, GridField const& rho)
{
    if (!(rho.min() > 0))
        throw std::invalid_argument("weighted error needs rho > 0 on the grid");
    return weighted_square_integral(gamma, rho);
}

double chi_squared_grid(GridField const& p, GridField const& q)
{
    check_same_shape(p, q);
    if (!(q.min() > 0))
        throw std::invalid_argument("chi-squared needs q > 0");
    double s = 0;
    for (std::size_t n = 0; n < p.size(); ++n)
        s += (p[n] - q[n]) * (p[n] - q[n]) / q[n];
    return s * cell_volume(p);
}

double relative_entropy_grid(GridField const& p, GridField const& q)
{
    check_same_shape(p, q);
    double s = 0;
    for (std::size_t n = 0; n < p.size(); ++n)
    {
        if (p[n] < 0 || q[n] < 0)
            throw std::invalid_argument("relative entropy needs densities");
        if (p[n] == 0)
            continue;
        if (q[n] == 0)
            throw std::invalid_argument("p is not absolutely continuous "
                                        "with respect to q");
        s += p[n] * std::log(p[n] / q[n]);
    }
    return s * cell_volume(p);
}

double total_variation_grid(GridField const& p, GridField const& q)
{
    check_same_shape(p, q);
    double s = 0;
    for (std::size_t n = 0; n < p.size(); ++n)
        s += std::abs(p[n] - q[n]);
    return 0.5 * s * cell_volume(p);
}

std::vector<double> cell_masses(GridField const& density, int bins)
{
    int const m = density.grid().points();
    if (bins < 1 || m % bins != 0)
        throw std::invalid_argument("bins must divide the grid size");
    int const ratio = m / bins;
    double const h = density.grid().spacing();
    int const axes = density.axes();
    // Contract one axis at a time: (outer, m, inner) -> (outer, bins, inner)
    std::vector<double> cur(density.values().begin(), density.values().end());
    std::size_t inner = density.size();
    std::size_t outer = 1;
    for (int a = 0; a < axes; ++a)
    {
        inner /= static_cast<std::size_t>(m);
        std::vector<double> next(outer * bins * inner, 0.0);
        for (std::size_t o = 0; o < outer; ++o)
            for (int b = 0; b < bins; ++b)
                for (int r = 0; r <= ratio; ++r)
                {
                    int const node = (b * ratio + r) % m;
                    double const w = (r == 0 || r == ratio) ? 0.5 * h : h;
                    double const* src = &cur[(o * m + node) * inner];
                    double* dst = &next[(o * bins + b) * inner];
                    for (std::size_t i = 0; i < inner; ++i)
                        dst[i] += w * src[i];
                }
        cur = std::move(next);
        outer *= static_cast<std::size_t>(bins);
    }
    return cur;
}

double binned_chi_squared(GridField const& p, GridField const& q, int bins)
{
    check_same_shape(p, q);
    auto const pc = cell_masses(p, bins);
    auto const qc = cell_masses(q, bins);
    double s = 0;
    for (std::size_t c = 0; c < qc.size(); ++c)
    {
        if (!(qc[c] > 0))
            throw std::invalid_argument("reference has empty histogram cells");
        s += (pc[c] - qc[c]) * (pc[c] - qc[c]) / qc[c];
    }
    return s;
}

std::size_t cell_of(std::span<double const> tuple, int bins)
{
    std::size_t idx = 0;
    for (double x : tuple)
    {
        int b = static_cast<int>(x * bins);
        b = std::clamp(b, 0, bins - 1);
        idx = idx * static_cast<std::size_t>(bins) + static_cast<std::size_t>(b);
    }
    return idx;
}

SampleEstimate chi_squared_from_samples(MarginalSamples const& samples,
                                        GridField const& reference,
                                        HistogramOptions const& opts)
{
    auto const report = divergence_from_samples(samples, reference, opts);
    SampleEstimate out;
    out.estimate = report.chi_squared;
    out.standard_error = report.se_chi_squared;
    out.bias = (static_cast<double>(cell_count(opts.bins, samples.j * samples.dim))
                - 1)
               / static_cast<double>(samples.size());
    return out;
}

DivergenceReport divergence_from_samples(MarginalSamples const& samples,
                                         GridField const& reference,
                                         HistogramOptions const& opts)
{
    auto const q = reference_masses(samples, reference, opts.bins);
    auto const rc = group_cells(samples, opts.bins);
    std::vector<double> counts(q.size(), 0.0);
    for (auto const& cells : rc.cells)
        for (auto c : cells)
            counts[c] += 1;
    double const n = static_cast<double>(rc.n_samples);
    auto const point = histogram_stats(counts, n, q);
    auto const boots = bootstrap(rc, q, opts, [&](auto const& c, double m) {
        return histogram_stats(c, m, q);
    });

    DivergenceReport r;
    r.chi_squared = point.chi_squared;
    r.relative_entropy = point.relative_entropy;
    r.total_variation = point.total_variation;
    r.se_chi_squared = spread(boots, [](auto const& b) { return b.chi_squared; });
    r.se_relative_entropy
        = spread(boots, [](auto const& b) { return b.relative_entropy; });
    r.se_total_variation
        = spread(boots, [](auto const& b) { return b.total_variation; });
    r.bins = opts.bins;
    r.n_samples = rc.n_samples;
    r.n_replicas = rc.cells.size();
    return r;
}

std::string DivergenceReport::to_json() const
{
    nlohmann::json j{{"chi_squared", chi_squared},
                     {"relative_entropy", relative_entropy},
                     {"total_variation", total_variation},
                     {"se_chi_squared", se_chi_squared},
                     {"se_relative_entropy", se_relative_entropy},
                     {"se_total_variation", se_total_variation},
                     {"bins", bins},
                     {"n_samples", n_samples},
                     {"n_replicas", n_replicas}};
    return j.dump(2);
}

DivergenceReport DivergenceReport::from_json(std::string const& text)
{
    auto const j = nlohmann::json::parse(text);
    DivergenceReport r;
    r.chi_squared = j.at("chi_squared").get<double>();
    r.relative_entropy = j.at("relative_entropy").get<double>();
    r.total_variation = j.at("total_variation").get<double>();
    r.se_chi_squared = j.at("se_chi_squared").get<double>();
    r.se_relative_entropy = j.at("se_relative_entropy").get<double>();
    r.se_total_variation = j.at("se_total_variation").get<double>();
    r.bins = j.at("bins").get<int>();
    r.n_samples = j.at("n_samples").get<std::size_t>();
    r.n_replicas = j.at("n_replicas").get<std::size_t>();
    return r;
}

}  // namespace chaoslab
