// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/partition/partition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace chaoslab
{
Partition::Partition(std::vector<int> labels) : labels_(std::move(labels))
{
    int max_label = -1;
    for (int l : labels_)
    {
        if (l < 0 || l > max_label + 1)
            throw std::invalid_argument("labels are not a restricted-growth "
                                        "string");
        max_label = std::max(max_label, l);
    }
    block_count_ = max_label + 1;
}

Partition Partition::from_blocks(std::vector<std::vector<int>> const& blocks)
{
    int n = 0;
    for (auto const& b : blocks)
        n += static_cast<int>(b.size());
    std::vector<int> raw(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (int e : blocks[b])
        {
            if (e < 0 || e >= n || raw[e] != -1)
                throw std::invalid_argument("blocks do not partition 0..n-1");
            raw[e] = static_cast<int>(b);
        }
    std::map<int, int> relabel;
    std::vector<int> labels(n);
    for (int e = 0; e < n; ++e)
    {
        auto [it, inserted]
            = relabel.emplace(raw[e], static_cast<int>(relabel.size()));
        labels[e] = it->second;
    }
    return Partition(std::move(labels));
}

std::vector<std::vector<int>> Partition::blocks() const
{
    std::vector<std::vector<int>> out(block_count_);
    for (int e = 0; e < this->size(); ++e)
        out[labels_[e]].push_back(e);
    return out;
}

std::string Partition::to_string() const
{
    std::string s;
    for (std::size_t e = 0; e < labels_.size(); ++e)
    {
        if (e)
            s += '|';
        s += std::to_string(labels_[e]);
    }
    return s;
}

std::vector<Partition> enumerate_partitions(int j)
{
    if (j < 1 || j > max_enumeration_size)
        throw std::invalid_argument("partition enumeration needs 1 <= j <= "
                                    + std::to_string(max_enumeration_size));
    std::vector<Partition> out;
    out.reserve(static_cast<std::size_t>(bell_number(j)));
    std::vector<int> a(j, 0), prefix_max(j, 0);
    while (true)
    {
        out.emplace_back(a);
        // Increment the rightmost position that can still grow.
        int k = j - 1;
        while (k > 0 && a[k] == prefix_max[k - 1] + 1)
            --k;
        if (k == 0)
            break;
        ++a[k];
        prefix_max[k] = std::max(prefix_max[k - 1], a[k]);
        for (int r = k + 1; r < j; ++r)
        {
            a[r] = 0;
            prefix_max[r] = prefix_max[k];
        }
    }
    return out;
}

std::int64_t bell_number(int j)
{
    if (j < 0)
        throw std::invalid_argument("Bell number of negative size");
    if (j == 0)
        return 1;
    std::vector<std::int64_t> row{1};
    for (int n = 1; n < j; ++n)
    {
        std::vector<std::int64_t> next{row.back()};
        for (auto v : row)
            next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.back();
}

std::int64_t mobius_weight(int block_count)
{
    if (block_count < 1)
        throw std::invalid_argument("partition must have a block");
    std::int64_t f = 1;
    for (int k = 2; k < block_count; ++k)
        f *= k;
    return (block_count % 2 == 1) ? f : -f;
}

std::int64_t mobius_weight(Partition const& p)
{
    return mobius_weight(p.block_count());
}

bool is_combining(Partition const& sigma, Partition const& pi)
{
    if (sigma.size() != pi.size())
        return false;
    // Each pi block must map to a single sigma label.
    std::vector<int> image(pi.block_count(), -1);
    for (int e = 0; e < pi.size(); ++e)
    {
        int& img = image[pi.labels()[e]];
        if (img == -1)
            img = sigma.labels()[e];
        else if (img != sigma.labels()[e])
            return false;
    }
    return true;
}

std::vector<Partition> combinings(Partition const& p)
{
    // Combinings of pi correspond one-to-one with partitions of its blocks.
    std::vector<Partition> out;
    for (auto const& merge : enumerate_partitions(p.block_count()))
    {
        std::vector<int> labels(p.size());
        for (int e = 0; e < p.size(); ++e)
            labels[e] = merge.labels()[p.labels()[e]];
        out.push_back(Partition::from_blocks([&] {
            std::vector<std::vector<int>> blocks(merge.block_count());
            for (int e = 0; e < p.size(); ++e)
                blocks[labels[e]].push_back(e);
            return blocks;
        }()));
    }
    return out;
}

std::int64_t mobius_sum_identity(Partition const& p)
{
    std::int64_t s = 0;
    for (auto const& sigma : combinings(p))
        s += mobius_weight(sigma);
    return s;
}

std::vector<OrderComposition>
enumerate_order_compositions(Partition const& p, int i)
{
    if (i < 0)
        throw std::invalid_argument("composition total must be nonnegative");
    int const b = p.block_count();
    std::vector<OrderComposition> out;
    std::vector<int> orders(b, 0);
    // Lexicographic walk over weak compositions of i into b parts
    auto recurse = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == b - 1)
        {
            orders[pos] = remaining;
            out.push_back({p, orders, i});
            return;
        }
        for (int v = 0; v <= remaining; ++v)
        {
            orders[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    if (b == 0)
    {
        if (i == 0)
            out.push_back({p, {}, 0});
        return out;
    }
    recurse(recurse, 0, i);
    return out;
}

std::int64_t composition_count(int block_count, int i)
{
    // C(i + b - 1, b - 1)
    std::int64_t num = 1, den = 1;
    for (int k = 1; k < block_count; ++k)
    {
        num *= i + k;
        den *= k;
    }
    return num / den;
}

std::vector<TriangularIndex> triangular_solve_order(int i_max)
{
    std::vector<TriangularIndex> out;
    for (int i = 0; i <= i_max; ++i)
        for (int j = i + 1; j >= 1; --j)
            out.push_back({i, j});
    return out;
}

std::vector<std::vector<int>> subsets_of(std::vector<int> const& elements)
{
    std::size_t const n = elements.size();
    std::vector<std::vector<int>> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask)
    {
        std::vector<int> s;
        for (std::size_t b = 0; b < n; ++b)
            if (mask & (std::size_t{1} << b))
                s.push_back(elements[b]);
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace chaoslab
