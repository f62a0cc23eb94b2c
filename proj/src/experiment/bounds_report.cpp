// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/experiment/bounds_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace chaoslab
{
namespace
{
//! I^l_j(t) as the tail of the negative binomial birth count
double birth_tail(int ell, int j, double beta, double t)
{
    if (ell == 0)
        return 1;
    if (t == 0)
        return 0;
    return boost::math::ibeta(static_cast<double>(ell), static_cast<double>(j),
                              -std::expm1(-beta * t));
}

double recurrence_rhs(int ell, int j, double beta, double t)
{
    if (t == 0)
        return 0;
    double const lambda = beta * j;
    auto integrand = [&](double s) {
        return std::exp(-lambda * (t - s)) * birth_tail(ell, j + 1, beta, s);
    };
    return lambda
           * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
               integrand, 0.0, t, 12, 1e-10);
}

//! Tracks an upper-bound check value <= bound
void check_le(InequalityCheck& c, double value, double bound, double tol)
{
    ++c.checked;
    double const margin = bound - value;
    if (c.checked == 1 || margin < c.worst)
        c.worst = margin;
    if (margin < -tol)
        ++c.violations;
}

//! Tracks an equality |value - target| <= tol
void check_eq(InequalityCheck& c, double value, double target, double tol)
{
    ++c.checked;
    double const err = std::abs(value - target);
    c.worst = std::max(c.worst, err);
    if (!(err <= tol))
        ++c.violations;
}
}  // namespace

BoundsReportOptions BoundsReportOptions::from_config(KeyValueConfig const& kv)
{
    BoundsReportOptions o;
    auto& l = o.lattice;
    l.j_values = kv.get_ints("lattice_j", l.j_values);
    l.ell_max = static_cast<int>(kv.get_int("lattice_ell_max", l.ell_max));
    l.b_values = kv.get_ints("lattice_b", l.b_values);
    l.t_values = kv.get_doubles("lattice_t", l.t_values);
    l.beta_values = kv.get_doubles("lattice_beta", l.beta_values);
    o.fault_injection = kv.get_double("fault_injection", o.fault_injection);
    o.tolerance = kv.get_double("tolerance", o.tolerance);
    o.output_dir = kv.get_string("output_dir", "");
    return o;
}

std::string InequalityCheck::summary() const
{
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s %s checked=%d violations=%d worst=%.3e",
                  this->pass() ? "PASS" : "FAIL", name.c_str(), checked,
                  violations, worst);
    return buf;
}

bool BoundsReport::all_pass() const
{
    return !checks.empty()
           && std::all_of(checks.begin(), checks.end(),
                          [](InequalityCheck const& c) { return c.pass(); });
}

BoundsReport run_bounds_report(BoundsReportOptions const& opts)
{
    BoundsReport report;
    report.rows = evaluate_lattice(opts.lattice);
    for (auto& row : report.rows)
    {
        row.value += opts.fault_injection;
        row.margin = row.poly_bound - row.value;
        if (row.exp_bound)
            row.margin = std::min(row.margin, *row.exp_bound - row.value);
    }

    InequalityCheck unit{"unit_interval"};
    InequalityCheck poly{"poly_bound"};
    InequalityCheck expb{"exp_bound"};
    InequalityCheck closed{"closed_form_order1"};
    InequalityCheck recur{"recurrence_residual"};

    // (beta, t, j, ell) -> I, one entry per lattice point
    std::map<std::tuple<double, double, int, int>, double> values;
    for (auto const& row : report.rows)
    {
        check_le(poly, row.value, row.poly_bound, opts.tolerance);
        if (row.exp_bound)
            check_le(expb, row.value, *row.exp_bound, opts.tolerance);
        values[{row.beta, row.t, row.j, row.ell}] = row.value;
    }
    for (auto const& [key, value] : values)
    {
        auto const [beta, t, j, ell] = key;
        check_le(unit, value, 1.0, opts.tolerance);
        check_le(unit, 0.0, value, opts.tolerance);
        if (ell == 1)
            check_eq(closed, value, -std::expm1(-beta * j * t), closed_form_tolerance);
        check_eq(recur, value, recurrence_rhs(ell - 1, j, beta, t),
                 recurrence_tolerance);
    }
    report.checks = {unit, poly, expb, closed, recur};
    // The exponential bound may have no admissible point on a small lattice
    if (expb.checked == 0)
        report.checks.erase(report.checks.begin() + 2);

    if (!opts.output_dir.empty())
    {
        std::filesystem::create_directories(opts.output_dir);
        auto const dir = std::filesystem::path(opts.output_dir);
        write_lattice_csv(report.rows, (dir / "bounds.csv").string());
        std::ofstream os(dir / "bounds_summary.txt");
        for (auto const& c : report.checks)
            os << c.summary() << '\n';
    }
    return report;
}

}  // namespace chaoslab
