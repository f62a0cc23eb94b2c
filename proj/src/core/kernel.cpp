// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/core/kernel.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chaoslab
{
namespace
{
constexpr double two_pi = 2 * std::numbers::pi;

double eval_series(std::vector<FourierMode> const& modes, double z)
{
    double s = 0;
    for (auto const& m : modes)
    {
        double const arg = two_pi * m.mode * z;
        s += m.cos_coeff * std::cos(arg) + m.sin_coeff * std::sin(arg);
    }
    return s;
}

void validate(std::vector<FourierMode> const& modes, char const* what)
{
    std::set<int> seen;
    for (auto const& m : modes)
    {
        if (m.mode < 0)
            throw std::invalid_argument(std::string(what)
                                        + ": negative Fourier mode");
        if (m.mode == 0 && m.sin_coeff != 0)
            throw std::invalid_argument(std::string(what)
                                        + ": mode 0 sin coefficient must be 0");
        if (!std::isfinite(m.cos_coeff) || !std::isfinite(m.sin_coeff))
            throw std::invalid_argument(std::string(what)
                                        + ": non-finite coefficient");
        if (!seen.insert(m.mode).second)
            throw std::invalid_argument(std::string(what)
                                        + ": duplicate Fourier mode");
    }
}

double magnitude_sum(std::vector<FourierMode> const& modes)
{
    double s = 0;
    for (auto const& m : modes)
        s += std::abs(m.cos_coeff) + std::abs(m.sin_coeff);
    return s;
}

}  // namespace

KernelSpec::KernelSpec(std::vector<FourierMode> drift,
                       std::vector<FourierMode> pair)
    : drift_(std::move(drift)), pair_(std::move(pair))
{
    validate(drift_, "drift b");
    validate(pair_, "pair kernel khat");
    auto by_mode = [](FourierMode const& a, FourierMode const& b) {
        return a.mode < b.mode;
    };
    std::sort(drift_.begin(), drift_.end(), by_mode);
    std::sort(pair_.begin(), pair_.end(), by_mode);
    sup_norm_bound_ = magnitude_sum(drift_) + magnitude_sum(pair_);
}

KernelSpec KernelSpec::parse(std::string const& text)
{
    std::vector<FourierMode> drift, pair;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag))
            continue;
        FourierMode m;
        if (!(ls >> m.mode >> m.cos_coeff >> m.sin_coeff))
            throw std::invalid_argument("kernel line " + std::to_string(lineno)
                                        + ": expected <tag> <mode> <cos> <sin>");
        std::string extra;
        if (ls >> extra)
            throw std::invalid_argument("kernel line " + std::to_string(lineno)
                                        + ": trailing tokens");
        if (tag == "b")
            drift.push_back(m);
        else if (tag == "khat")
            pair.push_back(m);
        else
            throw std::invalid_argument("kernel line " + std::to_string(lineno)
                                        + ": unknown tag '" + tag + "'");
    }
    return KernelSpec(std::move(drift), std::move(pair));
}

KernelSpec KernelSpec::from_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open kernel file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string KernelSpec::to_text() const
{
    std::ostringstream out;
    out << std::setprecision(17);
    for (auto const& m : drift_)
        out << "b " << m.mode << ' ' << m.cos_coeff << ' ' << m.sin_coeff << '\n';
    for (auto const& m : pair_)
        out << "khat " << m.mode << ' ' << m.cos_coeff << ' ' << m.sin_coeff
            << '\n';
    return out.str();
}

int KernelSpec::max_mode() const
{
    int n = 0;
    for (auto const& m : drift_)
        n = std::max(n, m.mode);
    for (auto const& m : pair_)
        n = std::max(n, m.mode);
    return n;
}

double KernelSpec::drift_at(double x) const
{
    return eval_series(drift_, x);
}

double KernelSpec::pair_at(double z) const
{
    return eval_series(pair_, z);
}

std::string KernelSpec::hash() const
{
    // FNV-1a over the canonical text form
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : this->to_text())
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

double eval_kernel(KernelSpec const& k, double x, double y)
{
    double z = x - y;
    z -= std::floor(z);
    return k.drift_at(x) + k.pair_at(z);
}

void eval_kernel(KernelSpec const& k,
                 std::span<double const> x,
                 std::span<double const> y,
                 std::span<double> out)
{
    if (x.size() != y.size() || out.size() != x.size())
        throw std::invalid_argument("kernel point dimensions differ");
    for (std::size_t c = 0; c < x.size(); ++c)
        out[c] = eval_kernel(k, x[c], y[c]);
}

void check_kernel_band(KernelSpec const& k, TorusGrid const& grid)
{
    if (2 * k.max_mode() >= grid.points())
        throw std::invalid_argument(
            "kernel mode " + std::to_string(k.max_mode())
            + " is at or above the Nyquist frequency of an M="
            + std::to_string(grid.points()) + " grid");
}

std::vector<GridField>
convolve_density(KernelSpec const& k, GridField const& rho)
{
    if (rho.arity() != 1)
        throw std::invalid_argument("convolve_density expects arity 1");
    auto const& grid = rho.grid();
    check_kernel_band(k, grid);
    int const d = grid.dim();
    int const M = grid.points();
    double const mass = quadrature(rho);

    // Marginal of rho along each component, since K acts componentwise.
    std::vector<std::vector<double>> marginal(d, std::vector<double>(M, 0.0));
    double const w = grid.cell_volume(1);
    for (std::size_t idx = 0; idx < rho.size(); ++idx)
    {
        std::size_t rest = idx;
        for (int c = d - 1; c >= 0; --c)
        {
            marginal[c][rest % M] += w * rho[idx] * M;
            rest /= M;
        }
    }
    // marginal[c] is now a density on T^1 (integral = mass) sampled at nodes.

    std::vector<GridField> out;
    for (int c = 0; c < d; ++c)
    {
        // Moments of the marginal against cos/sin of each pair mode.
        std::vector<double> conv(M, 0.0);
        for (auto const& mode : k.pair())
        {
            double cm = 0, sm = 0;
            for (int m = 0; m < M; ++m)
            {
                double const arg = two_pi * mode.mode * grid.node(m);
                cm += std::cos(arg) * marginal[c][m];
                sm += std::sin(arg) * marginal[c][m];
            }
            cm /= M;
            sm /= M;
            for (int m = 0; m < M; ++m)
            {
                double const arg = two_pi * mode.mode * grid.node(m);
                double const cx = std::cos(arg), sx = std::sin(arg);
                conv[m] += mode.cos_coeff * (cx * cm + sx * sm)
                           + mode.sin_coeff * (sx * cm - cx * sm);
            }
        }
        GridField comp(grid, 1);
        for (std::size_t idx = 0; idx < comp.size(); ++idx)
        {
            std::size_t rest = idx;
            for (int cc = d - 1; cc > c; --cc)
                rest /= M;
            int const m = static_cast<int>(rest % M);
            comp[idx] = k.drift_at(grid.node(m)) * mass + conv[m];
        }
        out.push_back(std::move(comp));
    }
    return out;
}

}  // namespace chaoslab
