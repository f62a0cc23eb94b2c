// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/pde/first_order.hpp"

#include <stdexcept>

#include "chaoslab/pde/imex.hpp"

namespace chaoslab
{
namespace
{
void check_every_step(FieldSeries const& s, TimeGrid const& tg, int arity)
{
    if (static_cast<int>(s.size()) != tg.n_steps + 1)
        throw std::invalid_argument("series must hold every time step");
    if (s.frames.front().arity() != arity)
        throw std::invalid_argument("series has the wrong arity");
    if (s.frames.front().grid().dim() != 1)
        throw std::invalid_argument("correction fields support d=1 only");
}

struct KernelTables
{
    int M;
    double h;
    std::vector<double> pair;  // K(x_a, x_b)

    KernelTables(KernelSpec const& k, TorusGrid const& grid)
        : M(grid.points()), h(grid.spacing()), pair(M * M)
    {
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b)
                pair[a * M + b] = eval_kernel(k, grid.node(a), grid.node(b));
    }
    double operator()(int a, int b) const { return pair[a * M + b]; }

    //! int K(x_a, s) u(s) ds
    std::vector<double> apply(GridField const& u) const
    {
        std::vector<double> out(M, 0.0);
        for (int a = 0; a < M; ++a)
            for (int s = 0; s < M; ++s)
                out[a] += (*this)(a, s) * u[s] * h;
        return out;
    }
};

void save_if_due(FieldSeries& out,
                 std::vector<int> const& saved,
                 std::size_t& next,
                 int n,
                 double dt,
                 GridField const& u)
{
    if (next < saved.size() && saved[next] == n)
    {
        out.times.push_back(n * dt);
        out.frames.push_back(u);
        ++next;
    }
}

}  // namespace

FieldSeries solve_g1_pair(FieldSeries const& rho,
                          KernelSpec const& k,
                          TimeGrid const& tg)
{
    tg.validate();
    check_every_step(rho, tg, 1);
    auto const& grid = rho.frames.front().grid();
    KernelTables K(k, grid);
    int const M = K.M;
    double const h = K.h;
    ImexStepper stepper(grid, 2, tg.dt);

    GridField g(grid, 2);
    FieldSeries out{{0.0}, {g}};
    auto const saved = tg.saved_steps();
    std::size_t next = 1;
    std::vector<GridField> flux(2, GridField(grid, 2));
    for (int n = 0; n < tg.n_steps; ++n)
    {
        GridField const& r = rho.frames[n];
        auto const conv = K.apply(r);
        // kg[a][b] = int K(x_a, s) g(b, s) ds
        std::vector<double> kg(M * M, 0.0);
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b)
            {
                double s = 0;
                for (int c = 0; c < M; ++c)
                    s += K(a, c) * g[b * M + c];
                kg[a * M + b] = s * h;
            }
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b)
            {
                double const rr = r[a] * r[b];
                double const gab = g[a * M + b];
                flux[0][a * M + b] = -(r[a] * kg[a * M + b] + conv[a] * gab)
                                     + conv[a] * rr - K(a, b) * rr;
                flux[1][a * M + b] = -(r[b] * kg[b * M + a] + conv[b] * gab)
                                     + conv[b] * rr - K(b, a) * rr;
            }
        stepper.step(g, flux);
        save_if_due(out, saved, next, n + 1, tg.dt, g);
    }
    return out;
}

FieldSeries solve_g1_single(FieldSeries const& rho,
                            FieldSeries const& g12,
                            KernelSpec const& k,
                            TimeGrid const& tg)
{
    tg.validate();
    check_every_step(rho, tg, 1);
    check_every_step(g12, tg, 2);
    auto const& grid = rho.frames.front().grid();
    KernelTables K(k, grid);
    int const M = K.M;
    double const h = K.h;
    ImexStepper stepper(grid, 1, tg.dt);

    GridField g(grid, 1);
    FieldSeries out{{0.0}, {g}};
    auto const saved = tg.saved_steps();
    std::size_t next = 1;
    std::vector<GridField> flux(1, GridField(grid, 1));
    for (int n = 0; n < tg.n_steps; ++n)
    {
        GridField const& r = rho.frames[n];
        GridField const& pair = g12.frames[n];
        auto const conv = K.apply(r);
        auto const kg = K.apply(g);
        for (int a = 0; a < M; ++a)
        {
            double kpair = 0;
            for (int s = 0; s < M; ++s)
                kpair += K(a, s) * pair[a * M + s];
            kpair *= h;
            flux[0][a] = -(r[a] * kg[a] + conv[a] * g[a]) + conv[a] * r[a]
                         - kpair - K(a, a) * r[a];
        }
        stepper.step(g, flux);
        save_if_due(out, saved, next, n + 1, tg.dt, g);
    }
    return out;
}

}  // namespace chaoslab
