// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "chaoslab/core/grid_field.hpp"

namespace chaoslab
{
//---------------------------------------------------------------------------//
//! One real Fourier mode: c*cos(2 pi n z) + s*sin(2 pi n z)
struct FourierMode
{
    int mode = 0;
    double cos_coeff = 0;
    double sin_coeff = 0;
};

//---------------------------------------------------------------------------//
/*!
 * Bounded interaction K(x, y) = b(x) + Khat(x - y) on the torus.
 *
 * Both parts are real trigonometric polynomials. In d > 1 the kernel acts
 * componentwise: component c of K(x, y) is b(x_c) + Khat(x_c - y_c).
 */
class KernelSpec
{
  public:
    KernelSpec() = default;
    KernelSpec(std::vector<FourierMode> drift, std::vector<FourierMode> pair);

    //! Zero interaction
    static KernelSpec zero() { return {}; }
    //! Parse the line-oriented kernel format (`b n c s` / `khat n c s`)
    static KernelSpec parse(std::string const& text);
    static KernelSpec from_file(std::string const& path);
    std::string to_text() const;

    std::vector<FourierMode> const& drift() const { return drift_; }
    std::vector<FourierMode> const& pair() const { return pair_; }

    //! Sum of coefficient magnitudes, an upper bound on sup |K|
    double sup_norm_bound() const { return sup_norm_bound_; }
    //! Highest Fourier mode present in either part
    int max_mode() const;
    bool is_zero() const { return drift_.empty() && pair_.empty(); }

    double drift_at(double x) const;
    double pair_at(double z) const;
    //! K(x, x) = b(x) + Khat(0)
    double diagonal_at(double x) const { return drift_at(x) + pair_at(0); }

    //! Stable content hash of the coefficient tables
    std::string hash() const;

  private:
    std::vector<FourierMode> drift_;
    std::vector<FourierMode> pair_;
    double sup_norm_bound_ = 0;
};

//! b(x) + Khat(x - y) with x - y reduced mod 1
double eval_kernel(KernelSpec const& k, double x, double y);
//! Componentwise evaluation for d-dimensional points
void eval_kernel(KernelSpec const& k,
                 std::span<double const> x,
                 std::span<double const> y,
                 std::span<double> out);

//! Reject kernels whose modes reach the grid Nyquist frequency
void check_kernel_band(KernelSpec const& k, TorusGrid const& grid);

//! Grid samples of int K(x, y) rho(y) dy, one field per dimension
std::vector<GridField>
convolve_density(KernelSpec const& k, GridField const& rho);

}  // namespace chaoslab
