// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/pde/mckean_vlasov.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "chaoslab/pde/imex.hpp"

namespace chaoslab
{
namespace
{
constexpr double two_pi = 2 * std::numbers::pi;

void check_cfl(KernelSpec const& k, TorusGrid const& grid, double dt)
{
    double const bound = k.sup_norm_bound();
    if (bound > 0 && dt > grid.spacing() / bound)
    {
        std::ostringstream msg;
        msg << "transport CFL violated: dt=" << dt
            << " > h/||K||=" << grid.spacing() / bound;
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

void check_initial_density(GridField const& f)
{
    if (f.arity() != 1)
        throw std::invalid_argument("initial density must have arity 1");
    if (!(f.min() > 0))
        throw std::invalid_argument("initial density must be bounded below "
                                    "by a positive constant");
    if (std::abs(quadrature(f) - 1) > 1e-10)
        throw std::invalid_argument("initial density must have mass 1");
}

std::vector<GridField>
mckean_vlasov_flux(KernelSpec const& k, GridField const& rho)
{
    auto flux = convolve_density(k, rho);
    for (auto& v : flux)
        for (std::size_t n = 0; n < v.size(); ++n)
            v[n] *= -rho[n];
    return flux;
}

MvSolution solve_mckean_vlasov(GridField const& f,
                               KernelSpec const& k,
                               TimeGrid const& tg)
{
    tg.validate();
    check_initial_density(f);
    check_kernel_band(k, f.grid());
    check_cfl(k, f.grid(), tg.dt);

    ImexStepper stepper(f.grid(), 1, tg.dt);
    MvSolution sol;
    GridField rho = f;
    double mass = quadrature(rho);
    sol.diagnostics.min_value = rho.min();
    sol.rho.times.push_back(0.0);
    sol.rho.frames.push_back(rho);
    auto const saved = tg.saved_steps();
    std::size_t next_save = 1;
    for (int n = 1; n <= tg.n_steps; ++n)
    {
        stepper.step(rho, mckean_vlasov_flux(k, rho));
        double const m = quadrature(rho);
        sol.diagnostics.max_step_mass_drift
            = std::max(sol.diagnostics.max_step_mass_drift, std::abs(m - mass));
        mass = m;
        double const lo = rho.min();
        sol.diagnostics.min_value = std::min(sol.diagnostics.min_value, lo);
        if (lo < -negativity_tolerance)
        {
            std::ostringstream msg;
            msg << "density became negative (" << lo << ") at step " << n
                << ", t=" << n * tg.dt << "; reduce dt";
            throw std::runtime_error(msg.str());
        }
        if (next_save < saved.size() && saved[next_save] == n)
        {
            sol.rho.times.push_back(n * tg.dt);
            sol.rho.frames.push_back(rho);
            ++next_save;
        }
    }
    return sol;
}

FieldSeries solve_mean_field_map(GridField const& f,
                                 KernelSpec const& k,
                                 TimeGrid const& tg)
{
    tg.validate();
    check_initial_density(f);
    auto const& grid = f.grid();
    if (grid.dim() != 1)
        throw std::invalid_argument("mean-field map supports d=1 only");
    check_kernel_band(k, grid);
    int const M = grid.points();
    int const top = (M - 1) / 2;  // modes kept: |n| <= top
    double const h = grid.spacing();
    double const dt = tg.dt;

    FieldSeries out;
    out.times.push_back(0);
    out.frames.push_back(f);
    GridField rho = f;
    auto const saved = tg.saved_steps();
    std::size_t next_save = 1;
    std::vector<std::complex<double>> coef(top + 1);
    for (int step = 1; step <= tg.n_steps; ++step)
    {
        auto const v = convolve_density(k, rho)[0];
        // Fourier coefficients of the pushed-forward law, then heat damping
        for (int n = 0; n <= top; ++n)
        {
            std::complex<double> s{};
            for (int m = 0; m < M; ++m)
            {
                double const y = grid.node(m) + dt * v[m];
                s += std::polar(rho[m] * h, -two_pi * n * y);
            }
            coef[n] = s * std::exp(-two_pi * two_pi * n * n * dt);
        }
        for (int m = 0; m < M; ++m)
        {
            double val = coef[0].real();
            for (int n = 1; n <= top; ++n)
                val += 2 * (coef[n] * std::polar(1.0, two_pi * n * grid.node(m)))
                               .real();
            rho[m] = val;
        }
        if (next_save < saved.size() && saved[next_save] == step)
        {
            out.times.push_back(step * dt);
            out.frames.push_back(rho);
            ++next_save;
        }
    }
    return out;
}

double l2_growth_excess(FieldSeries const& rho, KernelSpec const& k)
{
    auto sq = [](GridField const& u) {
        double s = 0;
        for (double v : u.values())
            s += v * v;
        return s * u.grid().cell_volume(u.arity());
    };
    double const k2 = k.sup_norm_bound() * k.sup_norm_bound();
    double const base = sq(rho.frames.front());
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < rho.size(); ++n)
        excess = std::max(excess,
                          sq(rho.frames[n]) - std::exp(k2 * rho.times[n]) * base);
    return excess;
}

}  // namespace chaoslab
