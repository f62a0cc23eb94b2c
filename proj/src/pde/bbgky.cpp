// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/pde/bbgky.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chaoslab/pde/hierarchy_terms.hpp"
#include "chaoslab/pde/imex.hpp"
#include "chaoslab/pde/mckean_vlasov.hpp"
#include "chaoslab/pde/remainder.hpp"

namespace chaoslab
{
TruncatedHierarchy solve_truncated_bbgky(GridField const& f,
                                         KernelSpec const& k,
                                         int n_particles,
                                         TimeGrid const& tg,
                                         int top_level)
{
    tg.validate();
    check_initial_density(f);
    auto const& grid = f.grid();
    if (grid.dim() != 1)
        throw std::invalid_argument("truncated hierarchy supports d=1 only");
    if (top_level < 1 || top_level > max_grid_arity)
        throw std::invalid_argument("top level out of range");
    check_kernel_band(k, grid);

    ArityTable cur;
    std::map<int, std::vector<HierarchyTerm>> terms;
    std::map<int, ImexStepper> steppers;
    for (int j = 1; j <= top_level; ++j)
    {
        cur.emplace(j, tensor_power(f, j));
        terms.emplace(j, enumerate_bbgky_terms(j, n_particles, top_level));
        steppers.emplace(std::piecewise_construct, std::forward_as_tuple(j),
                         std::forward_as_tuple(grid, j, tg.dt));
    }

    TruncatedHierarchy out;
    out.n_particles = n_particles;
    out.top_level = top_level;
    auto save = [&](double t) {
        out.times.push_back(t);
        for (auto const& [j, field] : cur)
            out.levels[j].push_back(field);
        for (int j = 1; j < top_level; ++j)
            out.max_consistency_error = std::max(
                out.max_consistency_error,
                max_abs_difference(integrate_coordinate(cur.at(j + 1), j),
                                   cur.at(j)));
    };
    save(0);

    ArityTable clusters;
    auto lookup = [&](int order, int size) -> GridField const& {
        return order == 0 ? cur.at(size) : clusters.at(size);
    };
    auto const saved = tg.saved_steps();
    std::size_t next = 1;
    std::map<int, std::vector<GridField>> flux;
    for (int n = 1; n <= tg.n_steps; ++n)
    {
        clusters.clear();
        for (int j = 1; j <= top_level; ++j)
            clusters.emplace(j, cluster_from_marginals(cur, j));
        for (int j = 1; j <= top_level; ++j)
        {
            flux[j].assign(j, GridField(grid, j));
            accumulate_fluxes(terms.at(j), k, lookup, grid, j, flux[j]);
        }
        for (int j = 1; j <= top_level; ++j)
            steppers.at(j).step(cur.at(j), flux.at(j));
        if (next < saved.size() && saved[next] == n)
        {
            save(n * tg.dt);
            ++next;
        }
    }
    return out;
}

double EnergyReport::min_margin() const
{
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < lhs.size(); ++n)
        m = std::min(m, rhs[n] - lhs[n]);
    return m;
}

double EnergyReport::min_apriori_margin() const
{
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < apriori_lhs.size(); ++n)
        m = std::min(m, apriori_rhs[n] - apriori_lhs[n]);
    return m;
}

EnergyReport check_energy_inequality(int i,
                                     int j,
                                     GTable const& gt,
                                     TruncatedHierarchy const& reference,
                                     KernelSpec const& k)
{
    if (reference.levels.empty())
        throw std::invalid_argument("missing truncated hierarchy reference");
    if (j < 1 || j + 1 > reference.top_level)
        throw std::invalid_argument("energy check needs level j+1 in the "
                                    "reference");
    if (i > gt.i_max)
        throw std::invalid_argument("requested order exceeds the g table");
    if (reference.times.size() != gt.times.size())
        throw std::invalid_argument("reference and g table time nodes differ");
    for (std::size_t n = 0; n < gt.times.size(); ++n)
        if (std::abs(reference.times[n] - gt.times[n]) > 1e-12)
            throw std::invalid_argument("reference and g table time nodes "
                                        "differ");

    double const n_part = reference.n_particles;
    double const k2 = k.sup_norm_bound() * k.sup_norm_bound();
    std::size_t const nodes = gt.node_count();
    std::vector<double> x_j(nodes), x_next(nodes), r_norm(nodes), a_j(nodes);
    for (std::size_t n = 0; n < nodes; ++n)
    {
        auto const slice = gt.slice(n);
        GridField const& rho = slice.at({0, 1});
        GridField gamma = assemble_phi(i, j, n_part, slice);
        gamma -= reference.levels.at(j)[n];
        GridField gamma_next = assemble_phi(i, j + 1, n_part, slice);
        gamma_next -= reference.levels.at(j + 1)[n];
        x_j[n] = weighted_square_integral(gamma, rho);
        x_next[n] = weighted_square_integral(gamma_next, rho);
        r_norm[n] = compute_remainder(i, j, n_part, slice, k).weighted_norm;
        a_j[n] = weighted_square_integral(reference.levels.at(j)[n], rho);
    }

    EnergyReport rep;
    rep.i = i;
    rep.j = j;
    double const dj = j;
    for (std::size_t n = 1; n + 1 < nodes; ++n)
    {
        double const span = gt.times[n + 1] - gt.times[n - 1];
        rep.times.push_back(gt.times[n]);
        rep.lhs.push_back((x_j[n + 1] - x_j[n - 1]) / span);
        rep.rhs.push_back(2 * dj * k2 * (x_next[n] - x_j[n])
                          + 4 * dj * dj * dj / (n_part * n_part) * k2 * x_j[n]
                          + 2 * r_norm[n]);
        rep.apriori_lhs.push_back((a_j[n + 1] - a_j[n - 1]) / span);
        rep.apriori_rhs.push_back(12 * dj * k2 * a_j[n]);
    }
    return rep;
}

}  // namespace chaoslab
