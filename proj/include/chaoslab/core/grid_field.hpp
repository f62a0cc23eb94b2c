// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "chaoslab/core/torus_grid.hpp"

namespace chaoslab
{
//---------------------------------------------------------------------------//
/*!
 * Real-valued function sampled on the tensor grid (T^d)^j.
 *
 * Storage is row-major with the first coordinate slowest; for d > 1 the
 * components of one torus factor are adjacent axes.
 */
class GridField
{
  public:
    GridField() = default;
    GridField(TorusGrid grid, int arity);
    GridField(TorusGrid grid, int arity, std::vector<double> values);

    static GridField constant(TorusGrid const& grid, int arity, double value);
    //! Sample a one-particle function on a d=1 grid
    static GridField
    from_function(TorusGrid const& grid, std::function<double(double)> fn);

    TorusGrid const& grid() const { return grid_; }
    int arity() const { return arity_; }
    int axes() const { return grid_.axes(arity_); }
    std::size_t size() const { return values_.size(); }

    std::span<double> values() { return values_; }
    std::span<double const> values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    double min() const;
    double max() const;
    double max_abs() const;

    GridField& operator+=(GridField const& other);
    GridField& operator-=(GridField const& other);
    GridField& operator*=(double scale);
    //! this += scale * other
    GridField& add_scaled(double scale, GridField const& other);

  private:
    TorusGrid grid_;
    int arity_ = 0;
    std::vector<double> values_;

    void check_compatible(GridField const& other) const;
};

GridField operator+(GridField lhs, GridField const& rhs);
GridField operator-(GridField lhs, GridField const& rhs);
GridField operator*(double scale, GridField rhs);

//! Rectangle-rule integral h^(d*j) * sum(values)
double quadrature(GridField const& field);

//! Max |a - b| over nodes; fields must share grid and arity
double max_abs_difference(GridField const& a, GridField const& b);

//! Whether the field is nonnegative with unit mass (within tolerance)
bool is_probability_density(GridField const& field, double tol = 1e-12);

//! rho^{(x) j}: tensor power of a one-particle field
GridField tensor_power(GridField const& rho, int j);

//! int u^2 / rho^{(x)j} over (T^d)^j for an arity-j field u and density rho
double weighted_square_integral(GridField const& u, GridField const& rho);

//! Integrate out one torus factor (0-based coordinate index)
GridField integrate_coordinate(GridField const& field, int coordinate);

//! Largest deviation from symmetry under swapping coordinates (diagnostic)
double max_asymmetry(GridField const& field);

}  // namespace chaoslab
