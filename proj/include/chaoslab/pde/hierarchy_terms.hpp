// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chaoslab/core/kernel.hpp"
#include "chaoslab/partition/partition.hpp"

namespace chaoslab
{
/*!
 * One factor g^order_{coords (+ star)} of a product term.
 *
 * Coordinates are 0-based indices into the output variables; `star` marks
 * the integration variable of an H operator.
 */
struct TermFactor
{
    int order = 0;
    std::vector<int> coords;  //!< sorted
    bool star = false;

    int size() const { return static_cast<int>(coords.size()) + star; }
};

/*!
 * coef * H_k[prod] or coef * S_{k,l}[prod] appearing on the right side of
 * u_t - Lap u = sum of terms.
 *
 * H_k h = d_k int K(x_k, x_*) h dx_* and S_{k,l} h = d_k (K(x_k, x_l) h),
 * with K(x, x) on the diagonal k = l.
 */
struct HierarchyTerm
{
    enum class Op
    {
        h,
        s
    };
    Op op = Op::h;
    int k = 0;
    int l = 0;
    double coef = 0;
    std::vector<TermFactor> factors;

    std::string to_string() const;
};

/*!
 * Right-hand side terms of the g^i_j equation, with the two transport terms
 * of the left side moved over.
 *
 * Factors outside T, empty factor sets and terms with zero coefficient are
 * dropped. (0, 1) is the nonlinear mean-field equation and is rejected.
 */
std::vector<HierarchyTerm> enumerate_g_terms(int i, int j);

/*!
 * Right-hand side of the truncated level-j marginal equation for N
 * particles. Factors use order 0 for marginals f and order 1 for cluster
 * functions g (the closure at the top level).
 */
std::vector<HierarchyTerm>
enumerate_bbgky_terms(int j, int n_particles, int top_level);

//! Maps (order, size) to the field for a factor
using FactorLookup = std::function<GridField const&(int order, int size)>;

/*!
 * Accumulate fluxes of the terms into one field per axis of the arity-j
 * grid, so that the right side equals sum_a d_a flux[a].
 */
void accumulate_fluxes(std::vector<HierarchyTerm> const& terms,
                       KernelSpec const& k,
                       FactorLookup const& lookup,
                       TorusGrid const& grid,
                       int j,
                       std::vector<GridField>& flux);

}  // namespace chaoslab
