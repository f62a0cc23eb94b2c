// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/pde/imex.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chaoslab
{
namespace
{
constexpr double two_pi = 2 * std::numbers::pi;
}

ImexStepper::ImexStepper(TorusGrid const& grid, int arity, double dt)
    : grid_(grid)
    , arity_(arity)
    , axes_(grid.axes(arity))
    , dt_(dt)
    , fft_(grid.axes(arity), grid.points())
{
    if (!(dt > 0))
        throw std::invalid_argument("dt must be positive");
    int const M = grid.points();
    std::size_t const ns = fft_.spectral_size();
    decay_.resize(ns);
    filter_.resize(ns);
    lap_.resize(ns);
    deriv_.assign(axes_, std::vector<double>(ns));
    auto const& freq = fft_.frequencies();
    for (std::size_t s = 0; s < ns; ++s)
    {
        double n2 = 0;
        bool keep = true;
        for (int a = 0; a < axes_; ++a)
        {
            int const n = freq[a][s];
            n2 += static_cast<double>(n) * n;
            keep = keep && 3 * std::abs(n) < M;
            deriv_[a][s] = (2 * std::abs(n) == M) ? 0.0 : two_pi * n;
        }
        lap_[s] = -two_pi * two_pi * n2;
        decay_[s] = std::exp(lap_[s] * dt);
        filter_[s] = keep ? 1.0 : 0.0;
    }
    u_hat_.resize(ns);
    f_hat_.resize(ns);
    acc_.resize(ns);
}

void ImexStepper::step(GridField& u, std::vector<GridField> const& flux) const
{
    if (u.arity() != arity_ || !(u.grid() == grid_))
        throw std::invalid_argument("field does not match stepper");
    if (static_cast<int>(flux.size()) != axes_)
        throw std::invalid_argument("need one flux field per axis");
    std::size_t const ns = fft_.spectral_size();
    fft_.forward(u.values(), u_hat_);
    std::fill(acc_.begin(), acc_.end(), std::complex<double>{});
    for (int a = 0; a < axes_; ++a)
    {
        if (flux[a].size() == 0)
            continue;
        fft_.forward(flux[a].values(), f_hat_);
        auto const& d = deriv_[a];
        for (std::size_t s = 0; s < ns; ++s)
            acc_[s] += std::complex<double>(0.0, d[s]) * f_hat_[s];
    }
    for (std::size_t s = 0; s < ns; ++s)
        u_hat_[s] = decay_[s] * (u_hat_[s] + dt_ * filter_[s] * acc_[s]);
    fft_.inverse(u_hat_, u.values());
}

GridField ImexStepper::divergence(std::vector<GridField> const& flux) const
{
    std::size_t const ns = fft_.spectral_size();
    std::fill(acc_.begin(), acc_.end(), std::complex<double>{});
    for (int a = 0; a < axes_ && a < static_cast<int>(flux.size()); ++a)
    {
        if (flux[a].size() == 0)
            continue;
        fft_.forward(flux[a].values(), f_hat_);
        for (std::size_t s = 0; s < ns; ++s)
            acc_[s] += std::complex<double>(0.0, deriv_[a][s]) * f_hat_[s];
    }
    GridField out(grid_, arity_);
    fft_.inverse(acc_, out.values());
    return out;
}

GridField ImexStepper::laplacian(GridField const& u) const
{
    fft_.forward(u.values(), u_hat_);
    for (std::size_t s = 0; s < u_hat_.size(); ++s)
        u_hat_[s] *= lap_[s];
    GridField out(grid_, arity_);
    fft_.inverse(u_hat_, out.values());
    return out;
}

}  // namespace chaoslab
