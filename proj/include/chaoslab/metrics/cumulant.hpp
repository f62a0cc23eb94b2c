// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "chaoslab/core/grid_field.hpp"
#include "chaoslab/metrics/divergence.hpp"

namespace chaoslab
{
//! Function of one particle position in T^d
using Observable = std::function<double(std::span<double const>)>;

//! c cos(2 pi n x_0) + s sin(2 pi n x_0)
Observable fourier_observable(int mode, double cos_coeff, double sin_coeff);
//! Periodic linear interpolation of a one-particle grid field
Observable grid_observable(GridField const& field);

//! Largest arity the cumulant estimators accept
inline constexpr int max_cumulant_order = 4;

/*!
 * Unbiased (k-statistic) estimate of kappa(phi_1(X_1), ..., phi_j(X_j)).
 *
 * Each sample tuple is one draw of (X_1, ..., X_j). Moment products are
 * estimated by U-statistics over distinct draws and combined by Moebius
 * inversion over partitions of {1..j}. The standard error is a grouped
 * jackknife over replicas.
 */
SampleEstimate joint_cumulant(MarginalSamples const& samples,
                              std::vector<Observable> const& phis);

//! Per-replica sums of phi over particles, for the exchangeable estimators
struct ReplicaSums
{
    int n_particles = 0;
    std::vector<double> sum;         //!< sum_p phi(X_p)
    std::vector<double> sum_square;  //!< sum_p phi(X_p)^2
};

ReplicaSums replica_sums(ParticleEnsemble const& ens, Observable const& phi);

//! E[phi(X_1)] from all particles; error from the spread of replica means
SampleEstimate exchangeable_mean(ReplicaSums const& sums);

/*!
 * kappa(phi(X_1), phi(X_2)) from all ordered particle pairs.
 *
 * Pair moments use distinct particles within a replica and the product of
 * means uses distinct replicas, so the estimate is unbiased and invariant
 * under phi -> phi + c. The error is the leave-one-replica-out jackknife.
 */
SampleEstimate exchangeable_pair_cumulant(ReplicaSums const& sums);

}  // namespace chaoslab
