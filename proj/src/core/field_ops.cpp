// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/core/field_ops.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>

#include "chaoslab/core/fft.hpp"

namespace chaoslab
{
namespace
{
constexpr double two_pi = 2 * std::numbers::pi;

void require_d1(TorusGrid const& grid, char const* what)
{
    if (grid.dim() != 1)
        throw std::invalid_argument(std::string(what)
                                    + " supports d=1 grids only");
}

std::size_t ipow(std::size_t base, int e)
{
    std::size_t r = 1;
    for (int i = 0; i < e; ++i)
        r *= base;
    return r;
}

}  // namespace

GridField routed_product(std::span<RoutedFactor const> factors,
                         TorusGrid const& grid,
                         int arity,
                         bool allow_shared)
{
    require_d1(grid, "routed_product");
    std::size_t const M = grid.points();
    std::vector<bool> used(arity, false);
    for (auto const& f : factors)
    {
        std::vector<bool> own(arity, false);
        if (!f.field || f.field->arity() != static_cast<int>(f.coords.size()))
            throw std::invalid_argument("factor arity does not match coords");
        if (!(f.field->grid() == grid))
            throw std::invalid_argument("factor lives on a different grid");
        for (int c : f.coords)
        {
            if (c < 0 || c >= arity || own[c] || (used[c] && !allow_shared))
                throw std::invalid_argument(
                    "factor coordinates must be disjoint and in range");
            own[c] = true;
        }
        for (int c = 0; c < arity; ++c)
            used[c] = used[c] || own[c];
    }

    GridField out = GridField::constant(grid, arity, 1.0);
    std::vector<std::size_t> digit(arity);
    std::vector<std::size_t> stride(arity);
    for (int a = 0; a < arity; ++a)
        stride[a] = ipow(M, arity - 1 - a);
    for (std::size_t idx = 0; idx < out.size(); ++idx)
    {
        for (int a = 0; a < arity; ++a)
            digit[a] = (idx / stride[a]) % M;
        double v = 1.0;
        for (auto const& f : factors)
        {
            std::size_t fi = 0;
            for (int c : f.coords)
                fi = fi * M + digit[c];
            v *= (*f.field)[fi];
        }
        out[idx] = v;
    }
    return out;
}

GridField kernel_integrate(KernelSpec const& k,
                           GridField const& h,
                           int star,
                           int target)
{
    auto const& grid = h.grid();
    require_d1(grid, "kernel_integrate");
    int const a = h.arity();
    if (star < 0 || star >= a)
        throw std::invalid_argument("star coordinate out of range");
    if (target == star || target >= a)
        throw std::invalid_argument("invalid kernel target coordinate");
    int const M = grid.points();
    auto const& modes = k.pair();
    std::size_t const nm = modes.size();

    std::vector<double> cos_tab(nm * M), sin_tab(nm * M), drift(M);
    for (std::size_t q = 0; q < nm; ++q)
        for (int m = 0; m < M; ++m)
        {
            double const arg = two_pi * modes[q].mode * grid.node(m);
            cos_tab[q * M + m] = std::cos(arg);
            sin_tab[q * M + m] = std::sin(arg);
        }
    for (int m = 0; m < M; ++m)
        drift[m] = k.drift_at(grid.node(m));

    // Moments along the star axis, indexed by the remaining coordinates.
    std::size_t const inner = ipow(M, a - 1 - star);
    std::size_t const outer = ipow(M, star);
    std::size_t const rest_size = outer * inner;
    std::vector<double> mass(rest_size, 0.0), cm(nm * rest_size, 0.0),
        sm(nm * rest_size, 0.0);
    double const w = grid.spacing();
    for (std::size_t o = 0; o < outer; ++o)
        for (int s = 0; s < M; ++s)
            for (std::size_t i = 0; i < inner; ++i)
            {
                double const v = w * h[(o * M + s) * inner + i];
                std::size_t const r = o * inner + i;
                mass[r] += v;
                for (std::size_t q = 0; q < nm; ++q)
                {
                    cm[q * rest_size + r] += cos_tab[q * M + s] * v;
                    sm[q * rest_size + r] += sin_tab[q * M + s] * v;
                }
            }

    auto combine = [&](std::size_t r, int xm) {
        double v = drift[xm] * mass[r];
        for (std::size_t q = 0; q < nm; ++q)
        {
            double const cx = cos_tab[q * M + xm], sx = sin_tab[q * M + xm];
            double const c = cm[q * rest_size + r], s = sm[q * rest_size + r];
            v += modes[q].cos_coeff * (cx * c + sx * s)
                 + modes[q].sin_coeff * (sx * c - cx * s);
        }
        return v;
    };

    if (target >= 0)
    {
        // Target is one of the remaining coordinates; its position among them
        int const tpos = target < star ? target : target - 1;
        std::size_t const tstride = ipow(M, a - 2 - tpos);
        GridField out(grid, a - 1);
        for (std::size_t r = 0; r < rest_size; ++r)
            out[r] = combine(r, static_cast<int>((r / tstride) % M));
        return out;
    }

    // New coordinate replaces the star axis.
    GridField out(grid, a);
    for (std::size_t o = 0; o < outer; ++o)
        for (int xm = 0; xm < M; ++xm)
            for (std::size_t i = 0; i < inner; ++i)
                out[(o * M + xm) * inner + i] = combine(o * inner + i, xm);
    return out;
}

GridField spectral_derivative(GridField const& field, int coordinate)
{
    auto const& grid = field.grid();
    require_d1(grid, "spectral_derivative");
    int const j = field.arity();
    if (coordinate < 0 || coordinate >= j)
        throw std::invalid_argument("coordinate out of range");
    int const M = grid.points();
    CubeFft fft(j, M);
    std::vector<std::complex<double>> spec(fft.spectral_size());
    fft.forward(field.values(), spec);
    auto const& freq = fft.frequencies()[coordinate];
    for (std::size_t s = 0; s < spec.size(); ++s)
    {
        int const n = freq[s];
        // The Nyquist mode has no well-defined real derivative.
        double const kx = (2 * std::abs(n) == M) ? 0.0 : two_pi * n;
        spec[s] *= std::complex<double>(0.0, kx);
    }
    GridField out(grid, j);
    fft.inverse(spec, out.values());
    return out;
}

}  // namespace chaoslab
