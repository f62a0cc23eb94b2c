// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/core/torus_grid.hpp"

#include <cmath>

namespace chaoslab
{
TorusGrid::TorusGrid(int dim, int points_per_dim)
    : dim_(dim), points_(points_per_dim)
{
    if (dim < 1)
        throw std::invalid_argument("torus dimension must be positive");
    if (points_per_dim < 1)
        throw std::invalid_argument("points per dimension must be positive");
}

std::size_t TorusGrid::nodes(int arity) const
{
    std::size_t n = 1;
    for (int a = 0; a < axes(arity); ++a)
        n *= static_cast<std::size_t>(points_);
    return n;
}

double TorusGrid::cell_volume(int arity) const
{
    return std::pow(spacing(), axes(arity));
}

}  // namespace chaoslab
