// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chaoslab
{
//---------------------------------------------------------------------------//
/*!
 * Set partition of {0..j-1} in restricted-growth form.
 *
 * Element k carries the label of its block; blocks are numbered by first
 * appearance, so label(0) = 0 and label(k) <= 1 + max(label(0..k-1)).
 * Printed as labels joined by '|', e.g. "0|0|1" for {{1,2},{3}}.
 */
class Partition
{
  public:
    Partition() = default;
    explicit Partition(std::vector<int> labels);
    //! Canonicalize an arbitrary block labelling
    static Partition from_blocks(std::vector<std::vector<int>> const& blocks);

    int size() const { return static_cast<int>(labels_.size()); }
    int block_count() const { return block_count_; }
    std::vector<int> const& labels() const { return labels_; }
    //! Blocks as sorted element lists, in label order
    std::vector<std::vector<int>> blocks() const;
    std::string to_string() const;

    bool operator==(Partition const&) const = default;
    auto operator<=>(Partition const&) const = default;

  private:
    std::vector<int> labels_;
    int block_count_ = 0;
};

//! Largest ground-set size accepted by the enumerators
inline constexpr int max_enumeration_size = 12;

//! All partitions of a j-set in lexicographic restricted-growth order
std::vector<Partition> enumerate_partitions(int j);

//! Bell number via the Bell triangle
std::int64_t bell_number(int j);

//! (-1)^(|pi|-1) (|pi|-1)!
std::int64_t mobius_weight(Partition const& p);
std::int64_t mobius_weight(int block_count);

//! Whether sigma is a combining of pi (every block of pi inside one of sigma)
bool is_combining(Partition const& sigma, Partition const& pi);

//! All combinings of pi, i.e. partitions coarser than or equal to pi
std::vector<Partition> combinings(Partition const& p);

//! Sum of Moebius weights over the combinings of pi
std::int64_t mobius_sum_identity(Partition const& p);

//---------------------------------------------------------------------------//
//! Assignment of a non-negative order to each block, summing to `total`
struct OrderComposition
{
    Partition partition;
    std::vector<int> orders;  //!< indexed by block label
    int total = 0;
};

std::vector<OrderComposition>
enumerate_order_compositions(Partition const& p, int i);

//! Number of weak compositions C(i + b - 1, b - 1)
std::int64_t composition_count(int block_count, int i);

//---------------------------------------------------------------------------//
/*!
 * Index (i, j) of the correction hierarchy.
 *
 * The admissible set T is 1 <= j <= i+1. The solve order puts lower i
 * first and, at equal i, larger j first.
 */
struct TriangularIndex
{
    int i = 0;
    int j = 1;

    static bool in_set(int i, int j) { return i >= 0 && j >= 1 && j <= i + 1; }
    bool valid() const { return in_set(i, j); }

    bool operator==(TriangularIndex const&) const = default;
    //! Lexicographic (i, j) for use as a map key
    auto operator<=>(TriangularIndex const&) const = default;
};

//! Strict solve order on T: lower i first, then larger j
inline bool solves_before(TriangularIndex a, TriangularIndex b)
{
    return a.i < b.i || (a.i == b.i && a.j > b.j);
}

//! Members of T with i <= i_max, in solve order
std::vector<TriangularIndex> triangular_solve_order(int i_max);

//! All subsets of `elements` (bitmask order), each sorted
std::vector<std::vector<int>> subsets_of(std::vector<int> const& elements);

}  // namespace chaoslab
