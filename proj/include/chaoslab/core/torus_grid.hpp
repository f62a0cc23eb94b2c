// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>

namespace chaoslab
{
//---------------------------------------------------------------------------//
/*!
 * Uniform periodic grid on the unit torus [0,1)^d.
 *
 * Node m along each dimension sits at m/M. A field of arity j lives on the
 * tensor grid (T^d)^j and holds M^(d*j) values.
 */
class TorusGrid
{
  public:
    TorusGrid() = default;
    TorusGrid(int dim, int points_per_dim);

    int dim() const { return dim_; }
    int points() const { return points_; }
    double spacing() const { return 1.0 / static_cast<double>(points_); }
    double node(int m) const
    {
        return static_cast<double>(m) / static_cast<double>(points_);
    }

    //! Number of grid axes for a field of the given arity
    int axes(int arity) const { return dim_ * arity; }
    //! Number of nodes M^(d*arity)
    std::size_t nodes(int arity) const;
    //! Quadrature cell volume h^(d*arity)
    double cell_volume(int arity) const;

    bool operator==(TorusGrid const& other) const = default;

  private:
    int dim_ = 1;
    int points_ = 1;
};

}  // namespace chaoslab
