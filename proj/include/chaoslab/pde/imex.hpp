// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "chaoslab/core/fft.hpp"
#include "chaoslab/core/grid_field.hpp"

namespace chaoslab
{
/*!
 * Integrating-factor Euler step for u_t = Lap u + sum_a d_a F_a.
 *
 * One step is u <- exp(dt Lap) (u + dt P sum_a d_a F_a), where P is the
 * 2/3-rule filter and F_a is the flux along axis a. Spatial derivatives are
 * spectral; the Nyquist mode is not differentiated.
 */
class ImexStepper
{
  public:
    ImexStepper(TorusGrid const& grid, int arity, double dt);

    int axes() const { return axes_; }
    double dt() const { return dt_; }

    //! Advance u in place. `flux` holds one field per axis; empty fields are
    //! treated as zero.
    void step(GridField& u, std::vector<GridField> const& flux) const;

    //! sum_a d_a F_a without filtering (for residual checks)
    GridField divergence(std::vector<GridField> const& flux) const;

    //! Spectral Laplacian of u
    GridField laplacian(GridField const& u) const;

  private:
    TorusGrid grid_;
    int arity_;
    int axes_;
    double dt_;
    CubeFft fft_;
    std::vector<double> decay_;
    std::vector<double> filter_;
    std::vector<double> lap_;
    std::vector<std::vector<double>> deriv_;
    mutable std::vector<std::complex<double>> u_hat_, f_hat_, acc_;
};

}  // namespace chaoslab
