// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "chaoslab/core/kernel.hpp"
#include "chaoslab/pde/g_hierarchy.hpp"

namespace chaoslab
{
//! phi^i_j = sum_{k<=i} N^-k f^k_j at one slice of the table
GridField assemble_phi(int i, int j, double n_particles,
                       CorrectionTable const& slice);

//! phi^i_j at every saved node
FieldSeries assemble_phi(int i, int j, double n_particles, GTable const& gt);

struct Remainder
{
    std::vector<GridField> components;  //!< one per coordinate k
    double weighted_norm = 0;           //!< sum_k int R_k^2 / rho^{(x)j}
};

/*!
 * R^i_j = N^-(i+1) sum_k e_k [j int K(x_k, x_*) f^i_{j+1} dx_*
 *                              - sum_l K(x_k, x_l) f^i_j].
 *
 * Needs f^i_{j+1}, so j + 1 must not exceed the grid arity cap.
 */
Remainder compute_remainder(int i, int j, double n_particles,
                            CorrectionTable const& slice,
                            KernelSpec const& k);

//! Same, at saved node `node` of a solved table
Remainder compute_remainder(int i, int j, double n_particles,
                            GTable const& gt, std::size_t node,
                            KernelSpec const& k);

/*!
 * Flux form of the truncated marginal operator acting on (u_j, u_{j+1}):
 * per axis k, -(N-j)/N int K(x_k, x_*) u_{j+1} dx_* - (1/N) sum_l
 * K(x_k, x_l) u_j. The marginal equation reads u_t = Lap u + div(flux).
 */
std::vector<GridField> marginal_flux(GridField const& u_j,
                                     GridField const& u_next,
                                     double n_particles,
                                     KernelSpec const& k);

/*!
 * Max-norm residual of the phi^i_j equation at a slice,
 *   phi_t - Lap phi - div(marginal_flux(phi_j, phi_{j+1})) + div R,
 * with phi_t built from the correction equations by the product rule.
 * `remainder_sign` multiplies div R (+1 gives the form that holds).
 */
double phi_equation_residual(int i, int j, double n_particles,
                             CorrectionTable const& slice,
                             KernelSpec const& k,
                             double remainder_sign = 1.0);

/*!
 * Same residual with phi_t from a centered difference of saved nodes
 * node-1 and node+1; limited by the time step.
 */
double phi_equation_residual_fd(int i, int j, double n_particles,
                                GTable const& gt, std::size_t node,
                                KernelSpec const& k);

}  // namespace chaoslab
