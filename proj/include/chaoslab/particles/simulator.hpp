// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "chaoslab/core/grid_field.hpp"
#include "chaoslab/core/kernel.hpp"
#include "chaoslab/particles/philox.hpp"

namespace chaoslab
{
struct SimConfig
{
    int n_particles = 1;
    int dim = 1;
    double dt = 1e-3;
    double horizon = 0;
    int n_replicas = 1;
    std::uint64_t base_seed = 0;
    KernelSpec kernel;
    GridField initial_density;
    //! Include k = j in the drift sum (1/N) sum_k K(X_j, X_k)
    bool include_self = true;
    //! Use the Fourier-moment drift instead of the pairwise sum
    bool fast_drift = true;

    void validate() const;
    int total_steps() const;
};

/*!
 * R replicas of N particles on T^d.
 *
 * Positions are replica-major: replica r, particle p, component c sits at
 * (r * N + p) * d + c. Particle p draws its noise under label labels[p].
 */
struct ParticleEnsemble
{
    int n_particles = 0;
    int dim = 1;
    int n_replicas = 0;
    std::vector<double> positions;
    std::vector<std::uint32_t> labels;
    double time = 0;
    std::uint64_t step_index = 0;
    std::uint64_t base_seed = 0;

    std::span<double> replica(int r);
    std::span<double const> replica(int r) const;
};

//! Stream tags separating initial sampling from time stepping
inline constexpr std::uint32_t stream_initial = 1;
inline constexpr std::uint32_t stream_step = 2;

/*!
 * N i.i.d. draws from a density on the grid.
 *
 * d = 1 inverts the cumulative of the piecewise-linear interpolant of f;
 * d = 2 uses rejection against the bilinear interpolant.
 */
std::vector<double> sample_initial(GridField const& f, int n,
                                   Philox4x32::Key key);

//! Sampled initial ensemble; replica r uses key (base_seed, r)
ParticleEnsemble make_ensemble(SimConfig const& cfg);

//! Drift (1/N) sum_k K(X_j, X_k) for all particles of one replica
void compute_drift(KernelSpec const& k, int n, int dim, bool include_self,
                   bool fast, std::span<double const> x,
                   std::span<double> drift);

//! One Euler-Maruyama step of every replica
void step(ParticleEnsemble& ens, SimConfig const& cfg);

struct Snapshots
{
    int n_particles = 0;
    int dim = 1;
    int n_replicas = 0;
    std::vector<double> times;
    //! positions[t] is laid out like ParticleEnsemble::positions
    std::vector<std::vector<double>> positions;
};

//! Step indices of output times; rejects times that are not multiples of dt
std::vector<std::uint64_t> output_steps(SimConfig const& cfg,
                                        std::vector<double> const& times);

using SnapshotVisitor
    = std::function<void(std::size_t time_index, ParticleEnsemble const&)>;

//! Run to the last output time, calling visit at each output time
void run_ensemble(SimConfig const& cfg, std::vector<double> const& times,
                  SnapshotVisitor const& visit);

Snapshots run_ensemble(SimConfig const& cfg, std::vector<double> const& times);

/*!
 * j-tuples of particle coordinates per replica.
 *
 * Without disjoint tuples each replica contributes particles 0..j-1; with
 * them it contributes floor(N / j) disjoint tuples. Tuples from one replica
 * are dependent; `replica_of` records the grouping.
 */
struct MarginalSamples
{
    int j = 1;
    int dim = 1;
    std::vector<double> points;  //!< tuple-major, j * dim values each
    std::vector<int> replica_of;

    std::size_t size() const { return replica_of.size(); }
    std::span<double const> tuple(std::size_t n) const
    {
        return {points.data() + n * j * dim, static_cast<std::size_t>(j * dim)};
    }
};

MarginalSamples extract_marginal_samples(Snapshots const& snaps,
                                         std::size_t time_index, int j,
                                         bool disjoint_tuples);
MarginalSamples extract_marginal_samples(ParticleEnsemble const& ens, int j,
                                         bool disjoint_tuples);

enum class SnapshotFormat
{
    csv,
    raw
};

void write_snapshots(Snapshots const& snaps, std::string const& path,
                     SnapshotFormat format);
Snapshots read_snapshots_raw(std::string const& path);

}  // namespace chaoslab
