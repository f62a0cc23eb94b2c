// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

namespace chaoslab
{
/*!
 * Inputs of the Gronwall cascade for x_k' <= beta k (alpha_k x_{k+1} - x_k)
 * + r_k with x_k(0) = 0.
 *
 * alpha[m] and r[m] hold alpha_{j+m} and r_{j+m}.
 */
struct BoundCascade
{
    double beta = 1;
    std::vector<double> alpha;
    std::vector<double> r;
    int j = 1;
    int ell = 0;
    double t = 0;
    std::optional<double> t0;

    void validate() const;
    //! log A^k_j = sum_{i=j}^{j+k-1} log alpha_i
    double log_a(int k) const;
};

//! alpha_k = 1 + k^2 / N^2 for k = j .. j + count - 1
std::vector<double> mean_field_alpha(double n_particles, int j, int count);

/*!
 * Right side of the cascade estimate for x_j(t).
 *
 * Without t0 the tail term is A^l_j I^l_j(t) sup_tail. With t0 the tail
 * splits into A^l_j I^l_j(t - t0) sup_tail plus sum_{k=1}^{l} A^l_j
 * I^k_{j+l-k}(t0) I^{l-k}_j(t - t0) sup_tail_early. Both forms add
 * (1/beta) sum_{k<l} A^{k+1}_j I^{k+1}_j(t) r_{j+k} / (alpha_{j+k}(j+k)).
 */
double cascade_bound(BoundCascade const& bc,
                     double sup_tail,
                     std::optional<double> sup_tail_early = std::nullopt);

struct HierarchyTrajectory
{
    int j = 1;
    std::vector<double> times;
    std::vector<std::vector<double>> levels;  //!< levels[m][n] = x_{j+m}(t_n)
};

/*!
 * Equality version of the hierarchy for x_j .. x_{k_max} with
 * x_{k_max+1} fixed at closure_value, integrated to bc.t by the 3-stage
 * Gauss-Legendre method. The step is halved until two resolutions agree
 * to 1e-12 relative; throws std::runtime_error if that fails.
 */
HierarchyTrajectory integrate_hierarchy(BoundCascade const& bc,
                                        double closure_value,
                                        int k_max,
                                        int output_points = 11);

}  // namespace chaoslab
