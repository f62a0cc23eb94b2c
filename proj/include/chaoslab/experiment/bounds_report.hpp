// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "chaoslab/bounds/integrals.hpp"
#include "chaoslab/experiment/config.hpp"

namespace chaoslab
{
struct BoundsReportOptions
{
    LatticeSpec lattice;
    //! Added to every tabulated I before checking (negative control)
    double fault_injection = 0;
    //! Slack allowed on the inequalities
    double tolerance = 1e-12;
    std::string output_dir;

    //! Keys lattice_j, lattice_ell_max, lattice_b, lattice_t, lattice_beta,
    //! fault_injection, tolerance, output_dir
    static BoundsReportOptions from_config(KeyValueConfig const& kv);
};

struct InequalityCheck
{
    std::string name;
    int checked = 0;
    int violations = 0;
    //! Smallest (bound - value), or largest residual for equalities
    double worst = 0;
    bool pass() const { return checked > 0 && violations == 0; }
    std::string summary() const;
};

struct BoundsReport
{
    std::vector<LatticeRow> rows;
    std::vector<InequalityCheck> checks;
    bool all_pass() const;
};

//! Largest |I^{l+1}_j - beta j int_0^t e^{-beta j (t-s)} I^l_{j+1}(s) ds| allowed
inline constexpr double recurrence_tolerance = 1e-6;
//! Largest |I^1_j - (1 - e^{-beta j t})| allowed
inline constexpr double closed_form_tolerance = 1e-10;

/*!
 * Certify the lattice: unit interval, polynomial and exponential bounds,
 * the first-order closed form, and the recurrence residual, where the
 * integral on the right is taken by adaptive Gauss-Kronrod over the
 * birth-process closed form of I^l_{j+1}. Writes `bounds.csv` and
 * `bounds_summary.txt` when an output directory is set.
 *
 * Throws std::invalid_argument("no lattice points") for an empty lattice.
 */
BoundsReport run_bounds_report(BoundsReportOptions const& opts);

}  // namespace chaoslab
