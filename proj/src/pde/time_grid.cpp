// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/pde/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace chaoslab
{
TimeGrid TimeGrid::from_horizon(double horizon, double dt, int save_every)
{
    if (!(dt > 0) || !(horizon >= 0))
        throw std::invalid_argument("time grid needs dt > 0, horizon >= 0");
    double const steps = horizon / dt;
    long const n = std::lround(steps);
    if (std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument("horizon is not a multiple of dt");
    TimeGrid tg{dt, static_cast<int>(n), save_every};
    tg.validate();
    return tg;
}

void TimeGrid::validate() const
{
    if (!(dt > 0) || n_steps < 0 || save_every < 1)
        throw std::invalid_argument("invalid time grid");
}

std::vector<int> TimeGrid::saved_steps() const
{
    std::vector<int> out;
    for (int n = 0; n <= n_steps; n += save_every)
        out.push_back(n);
    if (out.back() != n_steps)
        out.push_back(n_steps);
    return out;
}

}  // namespace chaoslab
