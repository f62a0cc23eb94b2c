// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "chaoslab/core/grid_field.hpp"
#include "chaoslab/partition/partition.hpp"

namespace chaoslab
{
//! Exchangeable fields keyed by arity
using ArityTable = std::map<int, GridField>;

//! Correction fields g^i_j keyed by their triangular index
using CorrectionTable = std::map<TriangularIndex, GridField>;

//! Largest arity assembled on grids
inline constexpr int max_grid_arity = 3;

//! Cluster function g_j from marginals f_1..f_j (Moebius transform)
GridField cluster_from_marginals(ArityTable const& f_table, int j);

//! Marginal f_j from clusters g_1..g_j
GridField marginals_from_clusters(ArityTable const& g_table, int j);

/*!
 * Correction f^i_j from the g table by the full partition/composition sum.
 *
 * Factors with an index outside T vanish and are skipped.
 */
GridField assemble_correction(int i, int j, CorrectionTable const& g_table);

/*!
 * Same quantity via the sparse form: sum over subsets P of [j] with
 * |P| <= 2i of rho on the complement times partitions of P whose blocks all
 * carry order >= 1.
 */
GridField
assemble_correction_sparse(int i, int j, CorrectionTable const& g_table);

/*!
 * Directional derivative of assemble_correction: the product rule applied
 * with each g replaced in turn by the matching entry of dg_table.
 */
GridField assemble_correction_tangent(int i,
                                      int j,
                                      CorrectionTable const& g_table,
                                      CorrectionTable const& dg_table);

}  // namespace chaoslab
