// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/partition/cluster.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "chaoslab/core/field_ops.hpp"

namespace chaoslab
{
namespace
{
void check_arity(int j)
{
    if (j < 1 || j > max_grid_arity)
        throw std::invalid_argument("grid assembly supports arity 1.."
                                    + std::to_string(max_grid_arity));
}

GridField const& lookup(ArityTable const& table, int arity)
{
    auto it = table.find(arity);
    if (it == table.end())
        throw std::invalid_argument("missing arity " + std::to_string(arity));
    return it->second;
}

GridField const& lookup(CorrectionTable const& table, int i, int j)
{
    auto it = table.find({i, j});
    if (it == table.end())
        throw std::invalid_argument("incomplete g table: missing ("
                                    + std::to_string(i) + ","
                                    + std::to_string(j) + ")");
    return it->second;
}

GridField product_over_blocks(ArityTable const& table, Partition const& p)
{
    std::vector<RoutedFactor> factors;
    for (auto const& block : p.blocks())
        factors.push_back({&lookup(table, static_cast<int>(block.size())),
                           block});
    return routed_product(factors, lookup(table, 1).grid(), p.size());
}

//! Check completeness up to order i so errors do not depend on the sum path
void check_table(int i, CorrectionTable const& g_table)
{
    for (auto idx : triangular_solve_order(i))
        lookup(g_table, idx.i, idx.j);
}

}  // namespace

GridField cluster_from_marginals(ArityTable const& f_table, int j)
{
    check_arity(j);
    GridField out(lookup(f_table, 1).grid(), j);
    for (auto const& p : enumerate_partitions(j))
        out.add_scaled(static_cast<double>(mobius_weight(p)),
                       product_over_blocks(f_table, p));
    return out;
}

GridField marginals_from_clusters(ArityTable const& g_table, int j)
{
    check_arity(j);
    GridField out(lookup(g_table, 1).grid(), j);
    for (auto const& p : enumerate_partitions(j))
        out += product_over_blocks(g_table, p);
    return out;
}

namespace
{
//! Calls visit(indices, blocks) for every nonvanishing product of f^i_j
template<class F>
void for_each_product(int i, int j, F&& visit)
{
    for (auto const& p : enumerate_partitions(j))
    {
        auto const blocks = p.blocks();
        for (auto const& comp : enumerate_order_compositions(p, i))
        {
            std::vector<TriangularIndex> idx;
            for (std::size_t b = 0; b < blocks.size(); ++b)
                idx.push_back(
                    {comp.orders[b], static_cast<int>(blocks[b].size())});
            if (std::all_of(idx.begin(), idx.end(),
                            [](auto t) { return t.valid(); }))
                visit(idx, blocks);
        }
    }
}
}  // namespace

GridField assemble_correction(int i, int j, CorrectionTable const& g_table)
{
    check_arity(j);
    check_table(i, g_table);
    TorusGrid const& grid = lookup(g_table, 0, 1).grid();
    GridField out(grid, j);
    for_each_product(i, j, [&](auto const& idx, auto const& blocks) {
        std::vector<RoutedFactor> factors;
        for (std::size_t b = 0; b < idx.size(); ++b)
            factors.push_back({&lookup(g_table, idx[b].i, idx[b].j), blocks[b]});
        out += routed_product(factors, grid, j);
    });
    return out;
}

GridField assemble_correction_tangent(int i,
                                      int j,
                                      CorrectionTable const& g_table,
                                      CorrectionTable const& dg_table)
{
    check_arity(j);
    check_table(i, g_table);
    check_table(i, dg_table);
    TorusGrid const& grid = lookup(g_table, 0, 1).grid();
    GridField out(grid, j);
    for_each_product(i, j, [&](auto const& idx, auto const& blocks) {
        for (std::size_t d = 0; d < idx.size(); ++d)
        {
            std::vector<RoutedFactor> factors;
            for (std::size_t b = 0; b < idx.size(); ++b)
            {
                auto const& table = (b == d) ? dg_table : g_table;
                factors.push_back({&lookup(table, idx[b].i, idx[b].j), blocks[b]});
            }
            out += routed_product(factors, grid, j);
        }
    });
    return out;
}

GridField
assemble_correction_sparse(int i, int j, CorrectionTable const& g_table)
{
    check_arity(j);
    check_table(i, g_table);
    GridField const& rho = lookup(g_table, 0, 1);
    TorusGrid const& grid = rho.grid();
    GridField out(grid, j);

    std::vector<int> all(j);
    for (int k = 0; k < j; ++k)
        all[k] = k;
    for (auto const& support : subsets_of(all))
    {
        int const s = static_cast<int>(support.size());
        if (s > 2 * i || (s == 0 && i > 0))
            continue;
        std::vector<RoutedFactor> rho_factors;
        for (int k = 0; k < j; ++k)
            if (std::find(support.begin(), support.end(), k) == support.end())
                rho_factors.push_back({&rho, {k}});
        if (s == 0)
        {
            out += routed_product(rho_factors, grid, j);
            continue;
        }
        for (auto const& p : enumerate_partitions(s))
        {
            auto const blocks = p.blocks();
            if (p.block_count() > i)
                continue;
            for (auto const& comp : enumerate_order_compositions(p, i))
            {
                auto factors = rho_factors;
                bool keep = true;
                for (std::size_t b = 0; b < blocks.size() && keep; ++b)
                {
                    int const size = static_cast<int>(blocks[b].size());
                    int const order = comp.orders[b];
                    if (order < 1 || !TriangularIndex::in_set(order, size))
                    {
                        keep = false;
                        break;
                    }
                    std::vector<int> coords;
                    for (int e : blocks[b])
                        coords.push_back(support[e]);
                    factors.push_back({&lookup(g_table, order, size), coords});
                }
                if (keep)
                    out += routed_product(factors, grid, j);
            }
        }
    }
    return out;
}

}  // namespace chaoslab
