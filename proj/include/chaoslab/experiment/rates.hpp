// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chaoslab/experiment/config.hpp"
#include "chaoslab/metrics/cumulant.hpp"

namespace chaoslab
{
//! Least-squares line through (log x, log y)
struct RateFit
{
    std::vector<double> log_x;
    std::vector<double> log_y;
    double slope = 0;
    double intercept = 0;
    double slope_se = 0;
};

//! Needs at least three points with positive finite coordinates
RateFit fit_rate(std::vector<std::pair<double, double>> const& points);

/*!
 * One measured quantity at (N, j, t).
 *
 * Observables are `mean:<phi>` (signed bias of E phi(X_1) against the
 * mean-field value, j = 1), `cumulant:<phi>` (pair cumulant of phi(X_1),
 * phi(X_2), j = 2) and `chi2` (histogram chi-squared of the j-marginal
 * against rho^j). `prediction` is the first-order term (N^-1 for the
 * first two, N^-2 for chi2) when the configured order is at least 1.
 */
struct RateRow
{
    int n_particles = 0;
    int j = 1;
    int order = 0;
    double t = 0;
    std::string observable;
    double estimate = 0;
    double prediction = 0;
    double se = 0;
};

struct RateResult
{
    std::vector<RateRow> rows;
    //! Seed used for each entry of n_list
    std::vector<std::uint64_t> seeds;
    bool completed = false;
    std::string failed_stage;
    std::string failure_message;
};

//! `cos<n>` or `sin<n>` with n >= 1
Observable named_observable(std::string const& name);

/*!
 * Simulate each N, compare against the mean-field solution and its
 * first-order corrections, and persist `rates.csv` plus `manifest.json`.
 *
 * The mean-field reference is the law of the mean-field Euler-Maruyama
 * map at the particle time step. A failing stage leaves the rows finished
 * so far on disk together with `failure.json`; the result reports the
 * failure instead of throwing.
 */
RateResult run_rate_experiment(ExperimentConfig const& cfg);

inline constexpr char const* rate_csv_header
    = "N,j,i,t,observable,estimate,prediction,se";

void write_rate_csv(std::vector<RateRow> const& rows, std::string const& path);

}  // namespace chaoslab
