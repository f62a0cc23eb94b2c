// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chaoslab/core/grid_field.hpp"
#include "chaoslab/particles/simulator.hpp"

namespace chaoslab
{
//! int |gamma / rho^{(x)j}|^2 rho^{(x)j}; rejects min rho <= 0
double weighted_l2_error(GridField const& gamma, GridField const& rho);

//! int (p/q - 1)^2 q on the grid
double chi_squared_grid(GridField const& p, GridField const& q);
//! int p log(p/q) with 0 log 0 = 0; rejects q <= 0 where p > 0
double relative_entropy_grid(GridField const& p, GridField const& q);
//! (1/2) int |p - q|
double total_variation_grid(GridField const& p, GridField const& q);

/*!
 * Masses of the B^(d j) histogram cells under the multilinear interpolant
 * of a grid density. Cells are ordered like grid nodes (coordinate 0
 * slowest). B must divide the grid size M.
 */
std::vector<double> cell_masses(GridField const& density, int bins);

//! Grid chi-squared between two densities after binning both into cells
double binned_chi_squared(GridField const& p, GridField const& q, int bins);

//! Cell index of a sample tuple
std::size_t cell_of(std::span<double const> tuple, int bins);

struct SampleEstimate
{
    double estimate = 0;
    double standard_error = 0;
    double bias = 0;  //!< additive correction already removed, if any
};

struct HistogramOptions
{
    int bins = 16;
    int bootstrap_resamples = 200;
    std::uint64_t seed = 0;
};

/*!
 * Histogram chi-squared of samples against a reference density.
 *
 * The plug-in value sum_c (p_c - q_c)^2 / q_c is reduced by its null bias
 * (B^(d j) - 1) / n. Standard errors come from a bootstrap over replicas,
 * keeping each replica's tuples together.
 */
SampleEstimate chi_squared_from_samples(MarginalSamples const& samples,
                                        GridField const& reference,
                                        HistogramOptions const& opts);

struct DivergenceReport
{
    double chi_squared = 0;
    double relative_entropy = 0;
    double total_variation = 0;
    double se_chi_squared = 0;
    double se_relative_entropy = 0;
    double se_total_variation = 0;
    int bins = 0;
    std::size_t n_samples = 0;
    std::size_t n_replicas = 0;

    std::string to_json() const;
    static DivergenceReport from_json(std::string const& text);
};

//! All three histogram divergences with replica-bootstrap errors
DivergenceReport divergence_from_samples(MarginalSamples const& samples,
                                         GridField const& reference,
                                         HistogramOptions const& opts);

}  // namespace chaoslab
