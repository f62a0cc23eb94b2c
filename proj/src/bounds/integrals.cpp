// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/bounds/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace chaoslab
{
namespace
{
//! Gauss-Legendre rule mapped to [0, 1], nodes ascending
struct UnitRule
{
    std::vector<double> x;
    std::vector<double> w;
};

template<unsigned N>
UnitRule unit_rule()
{
    using G = boost::math::quadrature::gauss<double, N>;
    auto const& a = G::abscissa();
    auto const& wt = G::weights();
    std::vector<std::pair<double, double>> nodes;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        nodes.emplace_back(a[i], wt[i]);
        if (a[i] != 0)
            nodes.emplace_back(-a[i], wt[i]);
    }
    std::sort(nodes.begin(), nodes.end());
    UnitRule r;
    for (auto const& [x, w] : nodes)
    {
        r.x.push_back(0.5 * (1 + x));
        r.w.push_back(0.5 * w);
    }
    return r;
}

constexpr unsigned panel_order = 10;

UnitRule const& panel_rule()
{
    static UnitRule const r = unit_rule<panel_order>();
    return r;
}

UnitRule const& fine_rule()
{
    static UnitRule const r = unit_rule<30>();
    return r;
}

//! Lagrange basis on the panel nodes, barycentric form
std::vector<double> lagrange(double s)
{
    auto const& nodes = panel_rule().x;
    std::size_t const q = nodes.size();
    static std::vector<double> const bary = [] {
        auto const& x = panel_rule().x;
        std::vector<double> b(x.size(), 1.0);
        for (std::size_t m = 0; m < x.size(); ++m)
            for (std::size_t k = 0; k < x.size(); ++k)
                if (k != m)
                    b[m] /= x[m] - x[k];
        return b;
    }();
    std::vector<double> out(q, 0.0);
    for (std::size_t m = 0; m < q; ++m)
        if (s == nodes[m])
        {
            out[m] = 1;
            return out;
        }
    double denom = 0;
    for (std::size_t m = 0; m < q; ++m)
    {
        out[m] = bary[m] / (s - nodes[m]);
        denom += out[m];
    }
    for (auto& v : out)
        v /= denom;
    return out;
}

/*!
 * Exact-in-polynomial weights for int e^{-c (tau - sigma)} p(sigma) dsigma
 * over [0, tau_i] and [0, 1], with p given by its panel node values.
 */
struct PanelOperator
{
    std::vector<double> partial;  //!< q x q, row i for node tau_i
    std::vector<double> full;     //!< q
    std::vector<double> decay;    //!< e^{-c tau_i}
    double decay_end = 0;

    explicit PanelOperator(double c)
    {
        auto const& nodes = panel_rule().x;
        auto const& fine = fine_rule();
        std::size_t const q = nodes.size();
        partial.assign(q * q, 0.0);
        full.assign(q, 0.0);
        auto accumulate = [&](double upper, double* row) {
            for (std::size_t k = 0; k < fine.x.size(); ++k)
            {
                double const s = upper * fine.x[k];
                double const w = upper * fine.w[k] * std::exp(-c * (upper - s));
                auto const basis = lagrange(s);
                for (std::size_t m = 0; m < q; ++m)
                    row[m] += w * basis[m];
            }
        };
        for (std::size_t i = 0; i < q; ++i)
        {
            accumulate(nodes[i], &partial[i * q]);
            decay.push_back(std::exp(-c * nodes[i]));
        }
        accumulate(1.0, full.data());
        decay_end = std::exp(-c);
    }
};

//! Horizon values of I^l_j for all j + l <= total on a P-panel mesh
std::map<std::pair<int, int>, double>
sweep(double beta, double t, int total, int panels)
{
    std::size_t const q = panel_order;
    double const h = t / panels;
    std::size_t const n_nodes = static_cast<std::size_t>(panels) * q;
    std::vector<PanelOperator> ops;
    for (int j = 1; j <= total; ++j)
        ops.emplace_back(beta * j * h);

    std::map<std::pair<int, int>, double> out;
    // level[j - 1] holds I^l_j at the mesh nodes for the current l.
    std::vector<std::vector<double>> level(total, std::vector<double>(n_nodes, 1.0));
    for (int j = 1; j <= total; ++j)
        out[{0, j}] = 1.0;
    for (int ell = 0; ell + 1 < total; ++ell)
    {
        std::vector<std::vector<double>> next(total - ell - 1);
        for (int j = 1; j + ell + 1 <= total; ++j)
        {
            auto const& src = level[j];  // I^l_{j+1}
            auto const& op = ops[j - 1];
            double const lambda = beta * j;
            std::vector<double> dst(n_nodes);
            double g = 0;  // int_0^{a_p} e^{-lambda(a_p - u)} I(u) du
            for (int p = 0; p < panels; ++p)
            {
                double const* f = &src[p * q];
                for (std::size_t i = 0; i < q; ++i)
                {
                    double s = 0;
                    for (std::size_t m = 0; m < q; ++m)
                        s += op.partial[i * q + m] * f[m];
                    dst[p * q + i] = lambda * (op.decay[i] * g + h * s);
                }
                double s = 0;
                for (std::size_t m = 0; m < q; ++m)
                    s += op.full[m] * f[m];
                g = op.decay_end * g + h * s;
            }
            out[{ell + 1, j}] = lambda * g;
            next[j - 1] = std::move(dst);
        }
        level = std::move(next);
    }
    return out;
}

}  // namespace

ExponentialIntegrals::ExponentialIntegrals(double beta, double t, int max_total)
    : beta_(beta), t_(t), max_total_(max_total)
{
    if (!(beta > 0) || !(t >= 0) || max_total < 1)
        throw std::invalid_argument("need beta > 0, t >= 0, max_total >= 1");
    if (t == 0)
    {
        for (int j = 1; j <= max_total; ++j)
            for (int ell = 0; ell + j <= max_total; ++ell)
                horizon_values_[{ell, j}] = ell == 0 ? 1.0 : 0.0;
        return;
    }
    // Start near one decay length per panel for the fastest rate.
    int panels = std::max(4, static_cast<int>(std::ceil(beta * max_total * t / 2)));
    auto coarse = sweep(beta, t, max_total, panels);
    constexpr int max_panels = 1 << 16;
    while (true)
    {
        int const finer = 2 * panels;
        auto fine = sweep(beta, t, max_total, finer);
        double err = 0;
        for (auto const& [key, v] : fine)
        {
            double const d = std::abs(v - coarse.at(key));
            if (v > 0)
                err = std::max(err, d / v);
            else if (d > 0)
                err = std::max(err, 1.0);
        }
        panels = finer;
        coarse = std::move(fine);
        achieved_error_ = err;
        if (err <= 0.1 * integral_tolerance)
            break;
        if (2 * panels > max_panels)
        {
            std::ostringstream msg;
            msg << "exponential integral quadrature did not converge: "
                << "relative error " << err << " with " << panels << " panels";
            throw std::runtime_error(msg.str());
        }
    }
    panels_ = panels;
    horizon_values_ = std::move(coarse);
}

double ExponentialIntegrals::at_horizon(int ell, int j) const
{
    auto it = horizon_values_.find({ell, j});
    if (it == horizon_values_.end())
        throw std::out_of_range("integral outside the tabulated range");
    return it->second;
}

double eval_I(int ell, int j, double beta, double t)
{
    if (ell < 0 || j < 1 || !(t >= 0))
        throw std::invalid_argument("eval_I needs ell >= 0, j >= 1, t >= 0");
    if (ell == 0)
        return 1.0;
    return ExponentialIntegrals(beta, t, j + ell).at_horizon(ell, j);
}

double poly_bound(int ell, int j, int b, double beta, double t)
{
    if (b < 1)
        throw std::invalid_argument("poly_bound needs a positive integer b");
    return std::pow(static_cast<double>(j + b) / (j + ell), b)
           * std::exp(beta * b * t);
}

std::optional<double> exp_bound(int ell, int j, double beta, double t)
{
    double const delta = std::exp(-2 * beta * t - 1) / 3;
    if (j > delta * ell)
        return std::nullopt;
    return std::exp(-delta * ell);
}

std::vector<LatticeRow> evaluate_lattice(LatticeSpec const& spec)
{
    if (spec.j_values.empty() || spec.ell_max < 1 || spec.b_values.empty()
        || spec.t_values.empty() || spec.beta_values.empty())
        throw std::invalid_argument("no lattice points");
    int const j_top = *std::max_element(spec.j_values.begin(), spec.j_values.end());
    std::vector<LatticeRow> rows;
    for (double beta : spec.beta_values)
        for (double t : spec.t_values)
        {
            ExponentialIntegrals const table(beta, t, j_top + spec.ell_max);
            for (int j : spec.j_values)
                for (int ell = 1; ell <= spec.ell_max; ++ell)
                {
                    double const value = table.at_horizon(ell, j);
                    auto const eb = exp_bound(ell, j, beta, t);
                    for (int b : spec.b_values)
                    {
                        LatticeRow row;
                        row.j = j;
                        row.ell = ell;
                        row.beta = beta;
                        row.t = t;
                        row.value = value;
                        row.poly_b = b;
                        row.poly_bound = poly_bound(ell, j, b, beta, t);
                        row.exp_bound = eb;
                        row.margin = row.poly_bound - value;
                        if (eb)
                            row.margin = std::min(row.margin, *eb - value);
                        rows.push_back(row);
                    }
                }
        }
    return rows;
}

void write_lattice_csv(std::vector<LatticeRow> const& rows, std::string const& path)
{
    std::ofstream os(path);
    os << "j,ell,beta,t,I,poly_b,poly_bound,exp_bound,margin\n";
    os.precision(17);
    for (auto const& r : rows)
    {
        os << r.j << "," << r.ell << "," << r.beta << "," << r.t << "," << r.value
           << "," << r.poly_b << "," << r.poly_bound << ",";
        if (r.exp_bound)
            os << *r.exp_bound;
        os << "," << r.margin << "\n";
    }
    if (!os)
        throw std::runtime_error("failed writing " + path);
}

}  // namespace chaoslab
