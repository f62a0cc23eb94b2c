// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "chaoslab/core/grid_field.hpp"

namespace chaoslab
{
//! Uniform time stepping on [0, n_steps * dt]; every save_every-th node kept
struct TimeGrid
{
    double dt = 1e-3;
    int n_steps = 0;
    int save_every = 1;

    double horizon() const { return dt * n_steps; }
    //! Validate and build; horizon must be an integer multiple of dt
    static TimeGrid from_horizon(double horizon, double dt, int save_every = 1);
    void validate() const;
    //! Step indices of the saved nodes (always includes 0 and n_steps)
    std::vector<int> saved_steps() const;
};

//! Fields sampled at increasing times
struct FieldSeries
{
    std::vector<double> times;
    std::vector<GridField> frames;

    std::size_t size() const { return frames.size(); }
    GridField const& back() const { return frames.back(); }
};

}  // namespace chaoslab
