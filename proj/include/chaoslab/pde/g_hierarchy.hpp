// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "chaoslab/core/kernel.hpp"
#include "chaoslab/partition/cluster.hpp"
#include "chaoslab/pde/time_grid.hpp"

namespace chaoslab
{
//! Largest correction order the hierarchy solver accepts
inline constexpr int max_correction_order = 2;

/*!
 * Solved correction fields g^i_j at the saved time nodes.
 *
 * Entries exist exactly for (i, j) in T with i <= i_max.
 */
struct GTable
{
    TorusGrid grid;
    TimeGrid time_grid;
    int i_max = 0;
    std::string kernel_hash;
    std::vector<double> times;
    std::map<TriangularIndex, std::vector<GridField>> entries;
    //! Largest single-coordinate marginal seen over all steps (not (0,1))
    std::map<TriangularIndex, double> max_marginal;

    std::size_t node_count() const { return times.size(); }
    GridField const& at(TriangularIndex idx, std::size_t node) const;
    //! All entries at one saved node
    CorrectionTable slice(std::size_t node) const;
    //! Saved node index for time t (must match within 1e-12)
    std::size_t node_at(double t) const;
};

struct HierarchyOptions
{
    int i_max = 1;
    std::size_t memory_budget_bytes = std::size_t{4} << 30;
};

//! Bytes needed to store all saved frames of all entries
std::size_t hierarchy_memory_bytes(int i_max,
                                   TorusGrid const& grid,
                                   TimeGrid const& tg);

/*!
 * Solve all g^i_j with i <= i_max from rho(0) = f.
 *
 * All entries advance together with the same integrating-factor Euler step;
 * each right side uses only values at the current step, which matches the
 * solve order on T. (0, 1) follows the mean-field equation.
 */
GTable solve_g_hierarchy(GridField const& f,
                         KernelSpec const& k,
                         TimeGrid const& tg,
                         HierarchyOptions const& opts);

//! Largest |int g dx_c| over the coordinates c of g
double max_coordinate_marginal(GridField const& g);

/*!
 * Time derivative of every entry at a slice, from the equations:
 * Lap g + unfiltered right side.
 */
CorrectionTable hierarchy_time_derivative(CorrectionTable const& slice,
                                          KernelSpec const& k,
                                          int i_max);

//! Persist as a directory with meta.json and one raw file per frame
void save_gtable(GTable const& gt, std::string const& dir);
GTable load_gtable(std::string const& dir);

}  // namespace chaoslab
