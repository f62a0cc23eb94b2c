// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "chaoslab/core/kernel.hpp"
#include "chaoslab/pde/time_grid.hpp"

namespace chaoslab
{
// Explicit first-order correction equations, written out by hand.
// rho (and g12) must hold a frame for every time step of tg.

//! Two-point first-order correlation g^1_2 with zero initial data
FieldSeries solve_g1_pair(FieldSeries const& rho,
                          KernelSpec const& k,
                          TimeGrid const& tg);

//! One-point first-order correction g^1_1 with zero initial data
FieldSeries solve_g1_single(FieldSeries const& rho,
                            FieldSeries const& g12,
                            KernelSpec const& k,
                            TimeGrid const& tg);

}  // namespace chaoslab
