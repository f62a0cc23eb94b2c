// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/bounds/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "chaoslab/bounds/integrals.hpp"

namespace chaoslab
{
void BoundCascade::validate() const
{
    if (!(beta > 0))
        throw std::invalid_argument("cascade needs beta > 0");
    if (j < 1 || ell < 0)
        throw std::invalid_argument("cascade needs j >= 1 and ell >= 0");
    if (static_cast<int>(alpha.size()) < ell || static_cast<int>(r.size()) < ell)
        throw std::invalid_argument("alpha and r must cover k = j .. j+ell-1");
    for (double a : alpha)
        if (!(a >= 1))
            throw std::invalid_argument("alpha_k must be >= 1");
    for (double v : r)
        if (!(v >= 0))
            throw std::invalid_argument("r_k must be >= 0");
    if (!(t >= 0))
        throw std::invalid_argument("cascade needs t >= 0");
    if (t0 && !(*t0 >= 0 && *t0 <= t))
        throw std::invalid_argument("t0 must lie in [0, t]");
}

double BoundCascade::log_a(int k) const
{
    double s = 0;
    for (int m = 0; m < k; ++m)
        s += std::log(alpha.at(m));
    return s;
}

std::vector<double> mean_field_alpha(double n_particles, int j, int count)
{
    std::vector<double> out;
    for (int k = j; k < j + count; ++k)
        out.push_back(1 + static_cast<double>(k) * k / (n_particles * n_particles));
    return out;
}

double cascade_bound(BoundCascade const& bc, double sup_tail,
                     std::optional<double> sup_tail_early)
{
    bc.validate();
    int const top = bc.j + std::max(bc.ell, 1);
    ExponentialIntegrals const at_t(bc.beta, bc.t, top);
    double forcing = 0;
    for (int k = 0; k < bc.ell; ++k)
        forcing += std::exp(bc.log_a(k + 1)) * at_t.at_horizon(k + 1, bc.j)
                   * bc.r[k] / (bc.alpha[k] * (bc.j + k));
    forcing /= bc.beta;

    double const a_ell = std::exp(bc.log_a(bc.ell));
    if (!bc.t0)
        return a_ell * at_t.at_horizon(bc.ell, bc.j) * sup_tail + forcing;

    double const early = sup_tail_early.value_or(sup_tail);
    ExponentialIntegrals const late(bc.beta, bc.t - *bc.t0, top);
    ExponentialIntegrals const first(bc.beta, *bc.t0, top);
    double tail = a_ell * late.at_horizon(bc.ell, bc.j) * sup_tail;
    for (int k = 1; k <= bc.ell; ++k)
        tail += a_ell * first.at_horizon(k, bc.j + bc.ell - k)
                * late.at_horizon(bc.ell - k, bc.j) * early;
    return tail + forcing;
}

namespace
{
//! 3-stage Gauss-Legendre Butcher tableau
struct GaussTableau
{
    Eigen::Matrix3d a;
    Eigen::Vector3d b;
    GaussTableau()
    {
        double const r = std::sqrt(15.0);
        a << 5.0 / 36, 2.0 / 9 - r / 15, 5.0 / 36 - r / 30,
            5.0 / 36 + r / 24, 2.0 / 9, 5.0 / 36 - r / 24,
            5.0 / 36 + r / 30, 2.0 / 9 + r / 15, 5.0 / 36;
        b << 5.0 / 18, 4.0 / 9, 5.0 / 18;
    }
};

//! Affine one-step map x -> step * x + shift of the method for x' = A x + c
struct StepMap
{
    Eigen::MatrixXd step;
    Eigen::VectorXd shift;
};

StepMap gauss_step(Eigen::MatrixXd const& a, Eigen::VectorXd const& c, double h)
{
    static GaussTableau const tab;
    Eigen::Index const n = a.rows();
    Eigen::MatrixXd big = Eigen::MatrixXd::Identity(3 * n, 3 * n);
    Eigen::MatrixXd rhs(3 * n, n + 1);
    for (int i = 0; i < 3; ++i)
    {
        for (int k = 0; k < 3; ++k)
            big.block(i * n, k * n, n, n) -= h * tab.a(i, k) * a;
        rhs.block(i * n, 0, n, n) = a;
        rhs.block(i * n, n, n, 1) = c;
    }
    Eigen::MatrixXd const stages = big.partialPivLu().solve(rhs);
    StepMap m;
    m.step = Eigen::MatrixXd::Identity(n, n);
    m.shift = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < 3; ++i)
    {
        m.step += h * tab.b(i) * stages.block(i * n, 0, n, n);
        m.shift += h * tab.b(i) * stages.block(i * n, n, n, 1);
    }
    return m;
}

std::vector<Eigen::VectorXd> run(StepMap const& m, int outputs, int steps_per_output)
{
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m.shift.size());
    std::vector<Eigen::VectorXd> out{x};
    for (int o = 1; o < outputs; ++o)
    {
        for (int s = 0; s < steps_per_output; ++s)
            x = m.step * x + m.shift;
        out.push_back(x);
    }
    return out;
}
}  // namespace

HierarchyTrajectory integrate_hierarchy(BoundCascade const& bc, double closure_value,
                                        int k_max, int output_points)
{
    if (k_max < bc.j)
        throw std::invalid_argument("integrate_hierarchy needs k_max >= j");
    if (output_points < 2)
        throw std::invalid_argument("need at least two output points");
    if (!(bc.beta > 0) || !(bc.t >= 0))
        throw std::invalid_argument("need beta > 0 and t >= 0");
    int const n = k_max - bc.j + 1;
    if (static_cast<int>(bc.alpha.size()) < n || static_cast<int>(bc.r.size()) < n)
        throw std::invalid_argument("alpha and r must cover k = j .. k_max");

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd c(n);
    for (int m = 0; m < n; ++m)
    {
        double const rate = bc.beta * (bc.j + m);
        a(m, m) = -rate;
        if (m + 1 < n)
            a(m, m + 1) = rate * bc.alpha[m];
        c(m) = bc.r[m];
    }
    c(n - 1) += bc.beta * k_max * bc.alpha[n - 1] * closure_value;

    HierarchyTrajectory traj;
    traj.j = bc.j;
    for (int o = 0; o < output_points; ++o)
        traj.times.push_back(bc.t * o / (output_points - 1));
    double const segment = bc.t / (output_points - 1);

    std::vector<Eigen::VectorXd> coarse;
    if (segment > 0)
    {
        // Start with about two steps per fastest decay length.
        int steps = std::max(
            1, static_cast<int>(std::ceil(2 * bc.beta * k_max * segment)));
        coarse = run(gauss_step(a, c, segment / steps), output_points, steps);
        constexpr int max_steps = 1 << 20;
        while (true)
        {
            steps *= 2;
            auto fine = run(gauss_step(a, c, segment / steps), output_points, steps);
            double err = 0;
            for (std::size_t o = 0; o < fine.size(); ++o)
                for (int m = 0; m < n; ++m)
                {
                    double const d = std::abs(fine[o](m) - coarse[o](m));
                    double const scale = std::abs(fine[o](m));
                    err = std::max(err, scale > 0 ? d / scale : (d > 0 ? 1.0 : 0.0));
                }
            coarse = std::move(fine);
            if (err <= 1e-12)
                break;
            if (steps > max_steps)
            {
                std::ostringstream msg;
                msg << "hierarchy integration did not converge: relative change "
                    << err << " at " << steps << " steps per output interval";
                throw std::runtime_error(msg.str());
            }
        }
    }
    else
    {
        coarse.assign(output_points, Eigen::VectorXd::Zero(n));
    }
    traj.levels.assign(n, std::vector<double>(output_points));
    for (int o = 0; o < output_points; ++o)
        for (int m = 0; m < n; ++m)
            traj.levels[m][o] = coarse[o](m);
    return traj;
}

}  // namespace chaoslab
