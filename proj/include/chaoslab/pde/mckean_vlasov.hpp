// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "chaoslab/core/kernel.hpp"
#include "chaoslab/pde/time_grid.hpp"

namespace chaoslab
{
struct MvDiagnostics
{
    double max_step_mass_drift = 0;  //!< max |mass(n+1) - mass(n)|
    double min_value = 0;            //!< min over all steps and nodes
};

struct MvSolution
{
    FieldSeries rho;
    MvDiagnostics diagnostics;
};

//! Negative values below this abort the solve
inline constexpr double negativity_tolerance = 1e-10;

/*!
 * Solve rho_t = Lap rho - div((K*rho) rho) from rho(0) = f.
 *
 * Supports d = 1 and d = 2. Requires f to be a density with min f > 0, the
 * kernel band below Nyquist and dt <= h / ||K||.
 */
MvSolution solve_mckean_vlasov(GridField const& f,
                               KernelSpec const& k,
                               TimeGrid const& tg);

//! Flux (K*rho) rho per axis, the transport part of the equation
std::vector<GridField>
mckean_vlasov_flux(KernelSpec const& k, GridField const& rho);

/*!
 * Law of the time-discrete mean-field Euler-Maruyama chain on T^1.
 *
 * Starting from f, each step pushes rho forward by y -> y + dt (K*rho)(y)
 * and convolves with the Gaussian of variance 2 dt. This is the large-N
 * limit of the particle scheme at the same dt, so comparisons against
 * particles carry no time-discretization bias.
 */
FieldSeries solve_mean_field_map(GridField const& f,
                                 KernelSpec const& k,
                                 TimeGrid const& tg);

/*!
 * Largest value of ||rho(t)||^2 - exp(||K||^2 t) ||f||^2 over the series.
 *
 * Non-positive when the L2 growth bound holds.
 */
double l2_growth_excess(FieldSeries const& rho, KernelSpec const& k);

//! Common input checks for solvers started from a density
void check_initial_density(GridField const& f);

}  // namespace chaoslab
