// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/pde/remainder.hpp"

#include <cmath>
#include <stdexcept>

#include "chaoslab/core/field_ops.hpp"
#include "chaoslab/pde/imex.hpp"

namespace chaoslab
{
namespace
{
int table_order(CorrectionTable const& slice)
{
    int i_max = 0;
    for (auto const& [idx, field] : slice)
        i_max = std::max(i_max, idx.i);
    return i_max;
}

void check_order(int i, int j, CorrectionTable const& slice)
{
    if (i < 0 || i > table_order(slice))
        throw std::invalid_argument("requested order exceeds the g table");
    if (j < 1 || j > max_grid_arity)
        throw std::invalid_argument("arity out of range");
}

//! K(x_k, x_l) u summed over l, with the diagonal kernel at l = k
GridField pair_sum(KernelSpec const& k, GridField const& u, int coord)
{
    auto const& grid = u.grid();
    int const M = grid.points();
    int const j = u.arity();
    std::vector<std::size_t> stride(j, 1);
    for (int a = j - 2; a >= 0; --a)
        stride[a] = stride[a + 1] * M;
    std::vector<double> pair(M * M), diag(M);
    for (int a = 0; a < M; ++a)
    {
        diag[a] = k.diagonal_at(grid.node(a));
        for (int b = 0; b < M; ++b)
            pair[a * M + b] = eval_kernel(k, grid.node(a), grid.node(b));
    }
    GridField out(grid, j);
    for (std::size_t idx = 0; idx < u.size(); ++idx)
    {
        std::size_t const a = (idx / stride[coord]) % M;
        double w = 0;
        for (int l = 0; l < j; ++l)
            w += (l == coord) ? diag[a]
                              : pair[a * M + (idx / stride[l]) % M];
        out[idx] = w * u[idx];
    }
    return out;
}

}  // namespace

GridField assemble_phi(int i, int j, double n_particles,
                       CorrectionTable const& slice)
{
    check_order(i, j, slice);
    GridField out = assemble_correction(0, j, slice);
    for (int m = 1; m <= i; ++m)
        out.add_scaled(std::pow(n_particles, -m),
                       assemble_correction(m, j, slice));
    return out;
}

FieldSeries assemble_phi(int i, int j, double n_particles, GTable const& gt)
{
    if (i > gt.i_max)
        throw std::invalid_argument("requested order exceeds the g table");
    FieldSeries out;
    for (std::size_t n = 0; n < gt.node_count(); ++n)
    {
        out.times.push_back(gt.times[n]);
        out.frames.push_back(assemble_phi(i, j, n_particles, gt.slice(n)));
    }
    return out;
}

std::vector<GridField> marginal_flux(GridField const& u_j,
                                     GridField const& u_next,
                                     double n_particles,
                                     KernelSpec const& k)
{
    int const j = u_j.arity();
    if (u_next.arity() != j + 1)
        throw std::invalid_argument("next marginal must have arity j+1");
    double const n = n_particles;
    std::vector<GridField> flux;
    for (int c = 0; c < j; ++c)
    {
        GridField f = kernel_integrate(k, u_next, j, c);
        f *= -(n - j) / n;
        f.add_scaled(-1 / n, pair_sum(k, u_j, c));
        flux.push_back(std::move(f));
    }
    return flux;
}

Remainder compute_remainder(int i, int j, double n_particles,
                            CorrectionTable const& slice,
                            KernelSpec const& k)
{
    check_order(i, j, slice);
    if (j + 1 > max_grid_arity)
        throw std::invalid_argument("remainder needs arity j+1 <= "
                                    + std::to_string(max_grid_arity));
    GridField const f_j = assemble_correction(i, j, slice);
    GridField const f_next = assemble_correction(i, j + 1, slice);
    double const scale = std::pow(n_particles, -(i + 1));
    Remainder out;
    for (int c = 0; c < j; ++c)
    {
        GridField r = kernel_integrate(k, f_next, j, c);
        r *= static_cast<double>(j);
        r -= pair_sum(k, f_j, c);
        r *= scale;
        out.weighted_norm += weighted_square_integral(r, slice.at({0, 1}));
        out.components.push_back(std::move(r));
    }
    return out;
}

Remainder compute_remainder(int i, int j, double n_particles,
                            GTable const& gt, std::size_t node,
                            KernelSpec const& k)
{
    return compute_remainder(i, j, n_particles, gt.slice(node), k);
}

namespace
{
double residual_with(GridField const& dphi, int i, int j, double n_particles,
                     CorrectionTable const& slice, KernelSpec const& k,
                     double remainder_sign)
{
    auto const& grid = slice.at({0, 1}).grid();
    ImexStepper ops(grid, j, 1.0);
    GridField const phi = assemble_phi(i, j, n_particles, slice);
    GridField const phi_next = assemble_phi(i, j + 1, n_particles, slice);
    GridField res = dphi;
    res -= ops.laplacian(phi);
    res -= ops.divergence(marginal_flux(phi, phi_next, n_particles, k));
    auto const r = compute_remainder(i, j, n_particles, slice, k);
    res.add_scaled(remainder_sign, ops.divergence(r.components));
    return res.max_abs();
}
}  // namespace

double phi_equation_residual(int i, int j, double n_particles,
                             CorrectionTable const& slice,
                             KernelSpec const& k,
                             double remainder_sign)
{
    check_order(i, j, slice);
    int const i_max = table_order(slice);
    auto const dslice = hierarchy_time_derivative(slice, k, i_max);
    GridField dphi = assemble_correction_tangent(0, j, slice, dslice);
    for (int m = 1; m <= i; ++m)
        dphi.add_scaled(std::pow(n_particles, -m),
                        assemble_correction_tangent(m, j, slice, dslice));
    return residual_with(dphi, i, j, n_particles, slice, k, remainder_sign);
}

double phi_equation_residual_fd(int i, int j, double n_particles,
                                GTable const& gt, std::size_t node,
                                KernelSpec const& k)
{
    if (node == 0 || node + 1 >= gt.node_count())
        throw std::invalid_argument("centered difference needs neighbours");
    double const span = gt.times[node + 1] - gt.times[node - 1];
    GridField dphi = assemble_phi(i, j, n_particles, gt.slice(node + 1));
    dphi -= assemble_phi(i, j, n_particles, gt.slice(node - 1));
    dphi *= 1 / span;
    return residual_with(dphi, i, j, n_particles, gt.slice(node), k, 1.0);
}

}  // namespace chaoslab
