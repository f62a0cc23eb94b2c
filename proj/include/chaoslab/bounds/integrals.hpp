// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chaoslab
{
//! Relative accuracy target of the quadrature sweep
inline constexpr double integral_tolerance = 1e-8;

/*!
 * Iterated exponential integrals I^l_j(s) for s in [0, t] and one beta.
 *
 * Built by the recurrence I^{l+1}_j(s) = beta j int_0^s e^{-beta j (s-u)}
 * I^l_{j+1}(u) du starting from I^0 = 1, on a uniform composite
 * Gauss-Legendre mesh that is refined until the values at t settle to the
 * tolerance. All (l, j) with j + l <= max_total are tabulated at once.
 *
 * Construction writes the table; afterwards all lookups are const and
 * safe to share between threads.
 */
class ExponentialIntegrals
{
  public:
    ExponentialIntegrals(double beta, double t, int max_total);

    double beta() const { return beta_; }
    double horizon() const { return t_; }
    int max_total() const { return max_total_; }
    int panels() const { return panels_; }
    //! Estimated relative error at t from the last refinement
    double achieved_error() const { return achieved_error_; }

    //! I^l_j(t) at the horizon
    double at_horizon(int ell, int j) const;

  private:
    double beta_;
    double t_;
    int max_total_;
    int panels_ = 0;
    double achieved_error_ = 0;
    std::map<std::pair<int, int>, double> horizon_values_;
};

//! I^l_j(t); throws std::runtime_error if the quadrature does not converge
double eval_I(int ell, int j, double beta, double t);

//! ((j + b) / (j + l))^b e^{beta b t}
double poly_bound(int ell, int j, int b, double beta, double t);

//! exp(-delta l) with delta = e^{-2 beta t - 1} / 3, when j <= delta l
std::optional<double> exp_bound(int ell, int j, double beta, double t);

struct LatticeSpec
{
    std::vector<int> j_values{1, 4, 16};
    int ell_max = 64;
    std::vector<int> b_values{1, 3, 7};
    std::vector<double> t_values{0.1, 1, 3};
    std::vector<double> beta_values{0.5, 1, 4};
};

struct LatticeRow
{
    int j = 0;
    int ell = 0;
    double beta = 0;
    double t = 0;
    double value = 0;  //!< I^l_j(t)
    int poly_b = 0;
    double poly_bound = 0;
    std::optional<double> exp_bound;
    //! Smallest of (bound - I) over the available bounds
    double margin = 0;
};

std::vector<LatticeRow> evaluate_lattice(LatticeSpec const& spec);

//! CSV with header j,ell,beta,t,I,poly_b,poly_bound,exp_bound,margin
void write_lattice_csv(std::vector<LatticeRow> const& rows,
                       std::string const& path);

}  // namespace chaoslab
