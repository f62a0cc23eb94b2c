// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/pde/hierarchy_terms.hpp"

#include <algorithm>
#include <map>
#include <cmath>
#include <sstream>
#include <tuple>
#include <stdexcept>

#include "chaoslab/core/field_ops.hpp"

namespace chaoslab
{
namespace
{
using Set = std::vector<int>;

Set range(int j)
{
    Set s(j);
    for (int k = 0; k < j; ++k)
        s[k] = k;
    return s;
}

Set minus(Set const& a, Set const& b)
{
    Set out;
    for (int x : a)
        if (std::find(b.begin(), b.end(), x) == b.end())
            out.push_back(x);
    return out;
}

Set with(Set a, int x)
{
    a.push_back(x);
    std::sort(a.begin(), a.end());
    return a;
}

//! Collects terms, dropping any whose factors vanish identically
class TermSink
{
  public:
    explicit TermSink(std::vector<HierarchyTerm>& out) : out_(out) {}

    void h(double coef, int k, std::vector<TermFactor> factors)
    {
        add({HierarchyTerm::Op::h, k, k, coef, std::move(factors)});
    }
    void s(double coef, int k, int l, std::vector<TermFactor> factors)
    {
        add({HierarchyTerm::Op::s, k, l, coef, std::move(factors)});
    }

  private:
    std::vector<HierarchyTerm>& out_;

    void add(HierarchyTerm t)
    {
        if (t.coef == 0)
            return;
        for (auto const& f : t.factors)
            if (f.size() == 0 || !TriangularIndex::in_set(f.order, f.size()))
                return;
        out_.push_back(std::move(t));
    }
};

TermFactor g(int order, Set coords, bool star = false)
{
    return {order, std::move(coords), star};
}

}  // namespace

std::string HierarchyTerm::to_string() const
{
    std::ostringstream os;
    os << coef << (op == Op::h ? " H_" : " S_") << k;
    if (op == Op::s)
        os << "," << l;
    os << "[";
    for (std::size_t n = 0; n < factors.size(); ++n)
    {
        auto const& f = factors[n];
        os << (n ? " " : "") << "g" << f.order << "_{";
        for (std::size_t c = 0; c < f.coords.size(); ++c)
            os << (c ? "," : "") << f.coords[c];
        if (f.star)
            os << (f.coords.empty() ? "*" : ",*");
        os << "}";
    }
    os << "]";
    return os.str();
}

std::vector<HierarchyTerm> enumerate_g_terms(int i, int j)
{
    if (!TriangularIndex::in_set(i, j))
        throw std::invalid_argument("(i, j) outside the triangular set");
    if (i == 0)
        throw std::invalid_argument(
            "(0, 1) is the mean-field equation; use the MV solver");
    std::vector<HierarchyTerm> out;
    TermSink sink(out);
    Set const all = range(j);
    double const dj = j;

    for (int k : all)
    {
        Set const rest = minus(all, {k});
        auto const subsets = subsets_of(rest);
        // Transport of g^i by the mean field, moved from the left side.
        sink.h(-1, k, {g(0, {k}), g(i, rest, true)});
        sink.h(-1, k, {g(i, all), g(0, {}, true)});
        // Coupling to the next arity at the same order.
        sink.h(-1, k, {g(i, all, true)});
        // Same-order products split between the k block and the star block.
        for (auto const& w : subsets)
            for (int m = 1; m <= i - 1; ++m)
                sink.h(-1, k, {g(m, with(w, k)), g(i - m, minus(rest, w), true)});
        // Lower order.
        sink.h(dj, k, {g(i - 1, all, true)});
        for (auto const& w : subsets)
        {
            Set const wk = with(w, k);
            Set const comp = minus(rest, w);
            double const cw = dj - 1 - static_cast<double>(w.size());
            for (int m = 0; m <= i - 1; ++m)
            {
                sink.h(cw, k, {g(m, wk, true), g(i - 1 - m, comp)});
                sink.h(dj, k, {g(m, wk), g(i - 1 - m, comp, true)});
            }
            for (auto const& r : subsets_of(comp))
            {
                Set const last = minus(comp, r);
                double const cr = cw - static_cast<double>(r.size());
                for (int m = 0; m <= i - 1; ++m)
                    for (int n = 0; n <= i - 1 - m; ++n)
                        sink.h(cr,
                               k,
                               {g(m, wk), g(n, r, true), g(i - 1 - m - n, last)});
            }
        }
    }
    for (int k : all)
        for (int l : all)
        {
            sink.s(-1, k, l, {g(i - 1, all)});
            if (k == l)
                continue;
            Set const rest = minus(all, {k, l});
            for (auto const& w : subsets_of(rest))
                for (int m = 0; m <= i - 1; ++m)
                    sink.s(-1, k, l, {g(m, with(w, k)), g(i - 1 - m, minus(minus(all, {k}), w))});
        }
    return out;
}

std::vector<HierarchyTerm>
enumerate_bbgky_terms(int j, int n_particles, int top_level)
{
    if (j < 1 || j > top_level || top_level > max_enumeration_size - 1)
        throw std::invalid_argument("invalid truncated hierarchy level");
    if (n_particles < top_level + 1)
        throw std::invalid_argument("need more particles than levels");
    std::vector<HierarchyTerm> out;
    double const n = n_particles;
    double const hc = -(n - j) / n;
    Set const all = range(j);
    for (int k : all)
    {
        if (j < top_level)
        {
            out.push_back({HierarchyTerm::Op::h, k, k, hc, {{0, all, true}}});
            continue;
        }
        // Closure: f_{j+1} as the cluster sum without the top cluster.
        for (auto const& p : enumerate_partitions(j + 1))
        {
            if (p.block_count() == 1)
                continue;
            std::vector<TermFactor> factors;
            for (auto const& block : p.blocks())
            {
                TermFactor f{1, {}, false};
                for (int e : block)
                {
                    if (e == j)
                        f.star = true;
                    else
                        f.coords.push_back(e);
                }
                factors.push_back(std::move(f));
            }
            out.push_back({HierarchyTerm::Op::h, k, k, hc, std::move(factors)});
        }
    }
    for (int k : all)
        for (int l : all)
            out.push_back({HierarchyTerm::Op::s, k, l, -1 / n, {{0, all, false}}});
    return out;
}

void accumulate_fluxes(std::vector<HierarchyTerm> const& terms,
                       KernelSpec const& k,
                       FactorLookup const& lookup,
                       TorusGrid const& grid,
                       int j,
                       std::vector<GridField>& flux)
{
    if (static_cast<int>(flux.size()) != j)
        flux.assign(j, GridField(grid, j));
    int const M = grid.points();

    // Kernel-integrated factors are reused across terms of one call.
    // Key: (order, size, target position or -1).
    std::map<std::tuple<int, int, int>, GridField> cache;
    auto integrated = [&](TermFactor const& f, int target_pos) -> GridField const& {
        auto key = std::make_tuple(f.order, f.size(), target_pos);
        auto it = cache.find(key);
        if (it == cache.end())
        {
            GridField const& h = lookup(f.order, f.size());
            it = cache.emplace(key, kernel_integrate(k, h, f.size() - 1, target_pos))
                     .first;
        }
        return it->second;
    };

    GridField kernel_pair(grid, 2), kernel_diag(grid, 1);
    for (int a = 0; a < M; ++a)
    {
        kernel_diag[a] = k.diagonal_at(grid.node(a));
        for (int b = 0; b < M; ++b)
            kernel_pair[a * M + b] = eval_kernel(k, grid.node(a), grid.node(b));
    }

    std::vector<RoutedFactor> routed;
    for (auto const& t : terms)
    {
        routed.clear();
        for (auto const& f : t.factors)
        {
            if (!f.star)
            {
                routed.push_back({&lookup(f.order, f.size()), f.coords});
                continue;
            }
            auto pos = std::find(f.coords.begin(), f.coords.end(), t.k);
            if (pos != f.coords.end())
            {
                routed.push_back(
                    {&integrated(f, static_cast<int>(pos - f.coords.begin())),
                     f.coords});
            }
            else
            {
                auto coords = f.coords;
                coords.push_back(t.k);
                routed.push_back({&integrated(f, -1), coords});
            }
        }
        GridField prod = routed_product(routed, grid, j, true);
        if (t.op == HierarchyTerm::Op::s)
        {
            // Multiply by K(x_k, x_l) pointwise.
            std::size_t const sk = static_cast<std::size_t>(
                std::pow(M, j - 1 - t.k));
            std::size_t const sl = static_cast<std::size_t>(
                std::pow(M, j - 1 - t.l));
            for (std::size_t idx = 0; idx < prod.size(); ++idx)
            {
                std::size_t const a = (idx / sk) % M;
                std::size_t const b = (idx / sl) % M;
                prod[idx] *= (t.k == t.l) ? kernel_diag[a] : kernel_pair[a * M + b];
            }
        }
        flux[t.k].add_scaled(t.coef, prod);
    }
}

}  // namespace chaoslab
