// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "chaoslab/core/kernel.hpp"
#include "chaoslab/pde/g_hierarchy.hpp"

namespace chaoslab
{
/*!
 * Marginals f_1..f_top of the N-particle system from i.i.d. initial data,
 * with the chain closed at the top level by dropping the (top+1)-cluster.
 */
struct TruncatedHierarchy
{
    int n_particles = 0;
    int top_level = 0;
    std::vector<double> times;
    std::map<int, std::vector<GridField>> levels;  //!< arity -> frames
    //! Largest |int f_{j+1} dx_{j+1} - f_j| seen over the saved nodes
    double max_consistency_error = 0;
};

TruncatedHierarchy solve_truncated_bbgky(GridField const& f,
                                         KernelSpec const& k,
                                         int n_particles,
                                         TimeGrid const& tg,
                                         int top_level = 3);

/*!
 * Both sides of the weighted L2 energy inequality for gamma = phi^i_j - f_j
 * and of the a priori growth bound for f_j, at interior saved nodes.
 *
 * Time derivatives are centered differences of the saved nodes.
 */
struct EnergyReport
{
    int i = 0;
    int j = 0;
    std::vector<double> times;
    std::vector<double> lhs;          //!< d/dt int gamma_j^2 / rho^j
    std::vector<double> rhs;
    std::vector<double> apriori_lhs;  //!< d/dt int f_j^2 / rho^j
    std::vector<double> apriori_rhs;

    double min_margin() const;
    double min_apriori_margin() const;
};

EnergyReport check_energy_inequality(int i,
                                     int j,
                                     GTable const& gt,
                                     TruncatedHierarchy const& reference,
                                     KernelSpec const& k);

}  // namespace chaoslab
