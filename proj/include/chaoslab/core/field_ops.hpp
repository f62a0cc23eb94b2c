// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "chaoslab/core/grid_field.hpp"
#include "chaoslab/core/kernel.hpp"

namespace chaoslab
{
//---------------------------------------------------------------------------//
/*!
 * A factor of a product over coordinates: field h evaluated at x^coords.
 *
 * Coordinates index the torus factors of the output (0-based). Only d = 1
 * grids are supported for routed products.
 */
struct RoutedFactor
{
    GridField const* field = nullptr;
    std::vector<int> coords;
};

/*!
 * Product prod_f h_f(x^{coords_f}) sampled on the arity-j grid.
 *
 * Coordinate sets of different factors must be disjoint unless
 * `allow_shared` is set; coordinates not covered by any factor are constant
 * directions.
 */
GridField routed_product(std::span<RoutedFactor const> factors,
                         TorusGrid const& grid,
                         int arity,
                         bool allow_shared = false);

/*!
 * Integrate one coordinate of a field against the kernel.
 *
 * Returns int K(x_target, s) h(..., s, ...) ds where s is the coordinate
 * `star` of h. If `target` is one of the remaining coordinates of h the
 * result has arity h-1 (indexing the remaining coordinates in order);
 * otherwise the target becomes a new coordinate and the result keeps arity
 * h, with the new coordinate placed where `star` was.
 */
GridField kernel_integrate(KernelSpec const& k,
                           GridField const& h,
                           int star,
                           int target);

//! Spectral derivative along one coordinate (d = 1 grids)
GridField spectral_derivative(GridField const& field, int coordinate);

}  // namespace chaoslab
