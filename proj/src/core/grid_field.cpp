// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/core/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chaoslab
{
GridField::GridField(TorusGrid grid, int arity)
    : grid_(grid), arity_(arity), values_(grid.nodes(arity), 0.0)
{
    if (arity < 0)
        throw std::invalid_argument("field arity must be nonnegative");
}

GridField::GridField(TorusGrid grid, int arity, std::vector<double> values)
    : grid_(grid), arity_(arity), values_(std::move(values))
{
    if (values_.size() != grid_.nodes(arity_))
        throw std::invalid_argument("field value count must equal M^(d*j)");
}

GridField GridField::constant(TorusGrid const& grid, int arity, double value)
{
    return GridField(grid, arity, std::vector<double>(grid.nodes(arity), value));
}

GridField GridField::from_function(TorusGrid const& grid,
                                   std::function<double(double)> fn)
{
    if (grid.dim() != 1)
        throw std::invalid_argument("from_function requires a d=1 grid");
    GridField out(grid, 1);
    for (int m = 0; m < grid.points(); ++m)
        out[m] = fn(grid.node(m));
    return out;
}

double GridField::min() const
{
    return values_.empty() ? 0.0
                           : *std::min_element(values_.begin(), values_.end());
}

double GridField::max() const
{
    return values_.empty() ? 0.0
                           : *std::max_element(values_.begin(), values_.end());
}

double GridField::max_abs() const
{
    double m = 0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

void GridField::check_compatible(GridField const& other) const
{
    if (!(grid_ == other.grid_) || arity_ != other.arity_)
        throw std::invalid_argument("fields live on different grids");
}

GridField& GridField::operator+=(GridField const& other)
{
    return add_scaled(1.0, other);
}

GridField& GridField::operator-=(GridField const& other)
{
    return add_scaled(-1.0, other);
}

GridField& GridField::operator*=(double scale)
{
    for (double& v : values_)
        v *= scale;
    return *this;
}

GridField& GridField::add_scaled(double scale, GridField const& other)
{
    this->check_compatible(other);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += scale * other.values_[i];
    return *this;
}

GridField operator+(GridField lhs, GridField const& rhs)
{
    lhs += rhs;
    return lhs;
}

GridField operator-(GridField lhs, GridField const& rhs)
{
    lhs -= rhs;
    return lhs;
}

GridField operator*(double scale, GridField rhs)
{
    rhs *= scale;
    return rhs;
}

double quadrature(GridField const& field)
{
    auto v = field.values();
    return field.grid().cell_volume(field.arity())
           * std::accumulate(v.begin(), v.end(), 0.0);
}

double max_abs_difference(GridField const& a, GridField const& b)
{
    if (!(a.grid() == b.grid()) || a.arity() != b.arity())
        throw std::invalid_argument("fields live on different grids");
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool is_probability_density(GridField const& field, double tol)
{
    return field.min() >= 0 && std::abs(quadrature(field) - 1.0) <= tol;
}

GridField tensor_power(GridField const& rho, int j)
{
    if (rho.arity() != 1)
        throw std::invalid_argument("tensor_power expects a one-particle field");
    if (j < 0)
        throw std::invalid_argument("tensor power must be nonnegative");
    auto const& grid = rho.grid();
    std::size_t const block = rho.size();
    GridField out = GridField::constant(grid, j, 1.0);
    // Index of factor p is digit p of the output index in base `block`.
    for (std::size_t idx = 0; idx < out.size(); ++idx)
    {
        std::size_t rest = idx;
        double v = 1.0;
        for (int p = 0; p < j; ++p)
        {
            v *= rho[rest % block];
            rest /= block;
        }
        out[idx] = v;
    }
    return out;
}

double weighted_square_integral(GridField const& u, GridField const& rho)
{
    if (rho.arity() != 1 || !(rho.grid() == u.grid()))
        throw std::invalid_argument("weight must be a one-particle field on "
                                    "the same grid");
    auto const weight = tensor_power(rho, u.arity());
    double s = 0;
    for (std::size_t n = 0; n < u.size(); ++n)
        s += u[n] * u[n] / weight[n];
    return s * u.grid().cell_volume(u.arity());
}

GridField integrate_coordinate(GridField const& field, int coordinate)
{
    int const j = field.arity();
    if (coordinate < 0 || coordinate >= j)
        throw std::invalid_argument("coordinate out of range");
    auto const& grid = field.grid();
    std::size_t const block = grid.nodes(1);
    std::size_t inner = 1;
    for (int p = coordinate + 1; p < j; ++p)
        inner *= block;
    std::size_t const outer = field.size() / (inner * block);
    GridField out(grid, j - 1);
    double const w = grid.cell_volume(1);
    for (std::size_t o = 0; o < outer; ++o)
    {
        for (std::size_t m = 0; m < block; ++m)
        {
            std::size_t const base = (o * block + m) * inner;
            for (std::size_t i = 0; i < inner; ++i)
                out[o * inner + i] += w * field[base + i];
        }
    }
    return out;
}

double max_asymmetry(GridField const& field)
{
    int const j = field.arity();
    if (j < 2)
        return 0;
    std::size_t const block = field.grid().nodes(1);
    std::vector<std::size_t> digits(j);
    double worst = 0;
    for (std::size_t idx = 0; idx < field.size(); ++idx)
    {
        std::size_t rest = idx;
        for (int p = j - 1; p >= 0; --p)
        {
            digits[p] = rest % block;
            rest /= block;
        }
        // Adjacent transpositions generate the symmetric group.
        for (int p = 0; p + 1 < j; ++p)
        {
            auto swapped = digits;
            std::swap(swapped[p], swapped[p + 1]);
            std::size_t sidx = 0;
            for (int q = 0; q < j; ++q)
                sidx = sidx * block + swapped[q];
            worst = std::max(worst, std::abs(field[idx] - field[sidx]));
        }
    }
    return worst;
}

}  // namespace chaoslab
