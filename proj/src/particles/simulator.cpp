// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/particles/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace chaoslab
{
namespace
{
constexpr double two_pi = 2 * std::numbers::pi;

inline double wrap(double x)
{
    x -= std::floor(x);
    return x >= 1.0 ? 0.0 : x;
}

//! Counter for (tag, particle label, 64-bit index)
Philox4x32::Counter counter(std::uint32_t tag, std::uint32_t label,
                            std::uint64_t index)
{
    return {label, static_cast<std::uint32_t>(index),
            static_cast<std::uint32_t>(index >> 32), tag};
}

std::vector<double> sample_1d(GridField const& f, int n, Philox4x32::Key key)
{
    int const M = f.grid().points();
    double const h = f.grid().spacing();
    // Piecewise-linear density between nodes m h and (m+1) h (periodic).
    std::vector<double> cdf(M + 1, 0.0);
    for (int m = 0; m < M; ++m)
        cdf[m + 1] = cdf[m] + 0.5 * h * (f[m] + f[(m + 1) % M]);
    double const total = cdf[M];
    std::vector<double> out(n);
    for (int p = 0; p < n; ++p)
    {
        auto const [u, unused] = uniform_pair(
            key, counter(stream_initial, static_cast<std::uint32_t>(p), 0));
        (void)unused;
        double const target = u * total;
        int m = static_cast<int>(
            std::upper_bound(cdf.begin(), cdf.end(), target) - cdf.begin()) - 1;
        m = std::clamp(m, 0, M - 1);
        double const a = f[m], b = f[(m + 1) % M];
        double const r = target - cdf[m];
        // Solve a s + (b - a) s^2 / (2 h) = r for s in [0, h].
        double s;
        double const c2 = (b - a) / (2 * h);
        if (std::abs(c2) * h < 1e-12 * std::max(a, 1e-300))
            s = r / a;
        else
            s = 2 * r / (a + std::sqrt(std::max(0.0, a * a + 4 * c2 * r)));
        out[p] = wrap(m * h + std::clamp(s, 0.0, h));
    }
    return out;
}

double bilinear(GridField const& f, double x, double y)
{
    int const M = f.grid().points();
    double const gx = x * M, gy = y * M;
    int const i0 = static_cast<int>(gx) % M, j0 = static_cast<int>(gy) % M;
    int const i1 = (i0 + 1) % M, j1 = (j0 + 1) % M;
    double const tx = gx - std::floor(gx), ty = gy - std::floor(gy);
    return (1 - tx) * (1 - ty) * f[i0 * M + j0] + tx * (1 - ty) * f[i1 * M + j0]
           + (1 - tx) * ty * f[i0 * M + j1] + tx * ty * f[i1 * M + j1];
}

std::vector<double> sample_2d(GridField const& f, int n, Philox4x32::Key key)
{
    double const top = f.max();
    std::vector<double> out(2 * static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p)
    {
        for (std::uint64_t attempt = 0;; ++attempt)
        {
            if (attempt > 1'000'000)
                throw std::runtime_error("rejection sampling did not accept");
            auto const w = Philox4x32::generate(
                counter(stream_initial, static_cast<std::uint32_t>(p), attempt),
                key);
            double const x = uniform_open(w[0], w[1]);
            double const y = uniform_open(w[2], w[3]);
            auto const [u, unused] = uniform_pair(
                key, counter(stream_initial, static_cast<std::uint32_t>(p),
                             attempt | (std::uint64_t{1} << 63)));
            (void)unused;
            if (u * top <= bilinear(f, x, y))
            {
                out[2 * p] = x;
                out[2 * p + 1] = y;
                break;
            }
        }
    }
    return out;
}

}  // namespace

void SimConfig::validate() const
{
    if (n_particles < 1 || dim < 1 || dim > 2 || n_replicas < 1)
        throw std::invalid_argument("invalid particle counts or dimension");
    if (!(dt > 0) || !(horizon >= 0))
        throw std::invalid_argument("need dt > 0 and horizon >= 0");
    if (initial_density.arity() != 1 || initial_density.grid().dim() != dim)
        throw std::invalid_argument("initial density must be a one-particle "
                                    "field of matching dimension");
    if (!(initial_density.min() > 0))
        throw std::invalid_argument("initial density must be bounded below "
                                    "by a positive constant");
    if (!is_probability_density(initial_density, 1e-10))
        throw std::invalid_argument("initial density must have mass 1");
}

int SimConfig::total_steps() const
{
    return static_cast<int>(std::llround(horizon / dt));
}

std::span<double> ParticleEnsemble::replica(int r)
{
    std::size_t const block = static_cast<std::size_t>(n_particles) * dim;
    return {positions.data() + r * block, block};
}

std::span<double const> ParticleEnsemble::replica(int r) const
{
    std::size_t const block = static_cast<std::size_t>(n_particles) * dim;
    return {positions.data() + r * block, block};
}

std::vector<double> sample_initial(GridField const& f, int n,
                                   Philox4x32::Key key)
{
    if (f.arity() != 1 || !(f.min() >= 0) || !is_probability_density(f, 1e-10))
        throw std::invalid_argument("sample_initial needs a probability "
                                    "density");
    if (n < 0)
        throw std::invalid_argument("negative sample count");
    switch (f.grid().dim())
    {
    case 1:
        return sample_1d(f, n, key);
    case 2:
        return sample_2d(f, n, key);
    default:
        throw std::invalid_argument("sampling supports d <= 2");
    }
}

ParticleEnsemble make_ensemble(SimConfig const& cfg)
{
    cfg.validate();
    ParticleEnsemble ens;
    ens.n_particles = cfg.n_particles;
    ens.dim = cfg.dim;
    ens.n_replicas = cfg.n_replicas;
    ens.base_seed = cfg.base_seed;
    ens.positions.resize(static_cast<std::size_t>(cfg.n_replicas)
                         * cfg.n_particles * cfg.dim);
    ens.labels.resize(cfg.n_particles);
    for (int p = 0; p < cfg.n_particles; ++p)
        ens.labels[p] = static_cast<std::uint32_t>(p);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < cfg.n_replicas; ++r)
    {
        auto const x = sample_initial(cfg.initial_density, cfg.n_particles,
                                      Philox4x32::make_key(cfg.base_seed, r));
        std::copy(x.begin(), x.end(), ens.replica(r).begin());
    }
    return ens;
}

void compute_drift(KernelSpec const& k, int n, int dim, bool include_self,
                   bool fast, std::span<double const> x,
                   std::span<double> drift)
{
    double const inv_n = 1.0 / n;
    for (int c = 0; c < dim; ++c)
    {
        auto at = [&](int p) { return x[static_cast<std::size_t>(p) * dim + c]; };
        auto out = [&](int p) -> double& {
            return drift[static_cast<std::size_t>(p) * dim + c];
        };
        if (!fast)
        {
            for (int p = 0; p < n; ++p)
            {
                double s = 0;
                for (int q = 0; q < n; ++q)
                    if (q != p || include_self)
                        s += eval_kernel(k, at(p), at(q));
                out(p) = s * inv_n;
            }
            continue;
        }
        int const top = k.max_mode();
        // Empirical Fourier moments (1/N) sum_q e^{2 pi i m x_q}.
        // Per-thread scratch, reused across calls
        thread_local std::vector<std::complex<double>> moment;
        thread_local std::vector<std::complex<double>> powers;
        moment.assign(top + 1, 0.0);
        powers.resize(static_cast<std::size_t>(n) * (top + 1));
        for (int p = 0; p < n; ++p)
        {
            std::complex<double> const e = std::polar(1.0, two_pi * at(p));
            std::complex<double> z = 1.0;
            for (int m = 0; m <= top; ++m)
            {
                powers[static_cast<std::size_t>(p) * (top + 1) + m] = z;
                moment[m] += z;
                z *= e;
            }
        }
        for (auto& v : moment)
            v *= inv_n;
        for (int p = 0; p < n; ++p)
        {
            auto const* zp = &powers[static_cast<std::size_t>(p) * (top + 1)];
            double s = 0;
            for (auto const& md : k.pair())
            {
                // Khat(x - y) averaged over y: Re/Im of e^{i m x} conj(moment)
                std::complex<double> const w = zp[md.mode] * std::conj(moment[md.mode]);
                s += md.cos_coeff * w.real() + md.sin_coeff * w.imag();
            }
            // b(x) from the same powers: Re/Im of e^{2 pi i m x}
            double bx = 0;
            for (auto const& md : k.drift())
                bx += md.cos_coeff * zp[md.mode].real()
                      + md.sin_coeff * zp[md.mode].imag();
            s += bx;
            if (!include_self)
                s -= (bx + k.pair_at(0.0)) * inv_n;
            out(p) = s;
        }
    }
}

void step(ParticleEnsemble& ens, SimConfig const& cfg)
{
    int const n = ens.n_particles;
    int const d = ens.dim;
    double const dt = cfg.dt;
    double const noise = std::sqrt(2 * dt);
    std::uint64_t const step_index = ens.step_index;
#pragma omp parallel
    {
        std::vector<double> drift(static_cast<std::size_t>(n) * d);
#pragma omp for schedule(static)
        for (int r = 0; r < ens.n_replicas; ++r)
        {
            auto x = ens.replica(r);
            compute_drift(cfg.kernel, n, d, cfg.include_self, cfg.fast_drift,
                          x, drift);
            auto const key = Philox4x32::make_key(ens.base_seed, r);
            for (int p = 0; p < n; ++p)
            {
                auto const xi = normal_pair(
                    key, counter(stream_step, ens.labels[p], step_index));
                for (int c = 0; c < d; ++c)
                {
                    std::size_t const at = static_cast<std::size_t>(p) * d + c;
                    x[at] = wrap(x[at] + dt * drift[at] + noise * xi[c]);
                }
            }
        }
    }
    ++ens.step_index;
    ens.time = static_cast<double>(ens.step_index) * dt;
}

std::vector<std::uint64_t> output_steps(SimConfig const& cfg,
                                        std::vector<double> const& times)
{
    std::vector<std::uint64_t> out;
    double prev = -1;
    for (double t : times)
    {
        if (t < prev)
            throw std::invalid_argument("output times must be sorted");
        if (t < 0 || t > cfg.horizon + 1e-12)
            throw std::invalid_argument("output time outside [0, horizon]");
        double const steps = std::round(t / cfg.dt);
        if (std::abs(steps * cfg.dt - t) > 1e-12)
        {
            std::ostringstream msg;
            msg << "output time " << t << " is not a multiple of dt=" << cfg.dt;
            throw std::invalid_argument(msg.str());
        }
        out.push_back(static_cast<std::uint64_t>(steps));
        prev = t;
    }
    return out;
}

void run_ensemble(SimConfig const& cfg, std::vector<double> const& times,
                  SnapshotVisitor const& visit)
{
    auto const steps = output_steps(cfg, times);
    ParticleEnsemble ens = make_ensemble(cfg);
    for (std::size_t t = 0; t < steps.size(); ++t)
    {
        while (ens.step_index < steps[t])
            step(ens, cfg);
        visit(t, ens);
    }
}

Snapshots run_ensemble(SimConfig const& cfg, std::vector<double> const& times)
{
    Snapshots snaps;
    snaps.n_particles = cfg.n_particles;
    snaps.dim = cfg.dim;
    snaps.n_replicas = cfg.n_replicas;
    run_ensemble(cfg, times, [&](std::size_t t, ParticleEnsemble const& ens) {
        snaps.times.push_back(times[t]);
        snaps.positions.push_back(ens.positions);
    });
    return snaps;
}

namespace
{
MarginalSamples extract(std::span<double const> pos, int n, int dim,
                        int replicas, int j, bool disjoint)
{
    if (j < 1 || j > n)
        throw std::invalid_argument("marginal arity must be in 1..N");
    MarginalSamples out;
    out.j = j;
    out.dim = dim;
    int const per = disjoint ? n / j : 1;
    std::size_t const width = static_cast<std::size_t>(j) * dim;
    out.points.reserve(static_cast<std::size_t>(replicas) * per * width);
    for (int r = 0; r < replicas; ++r)
        for (int s = 0; s < per; ++s)
        {
            auto const* first
                = pos.data()
                  + (static_cast<std::size_t>(r) * n + s * j) * dim;
            out.points.insert(out.points.end(), first, first + width);
            out.replica_of.push_back(r);
        }
    return out;
}
}  // namespace

MarginalSamples extract_marginal_samples(Snapshots const& snaps,
                                         std::size_t time_index, int j,
                                         bool disjoint_tuples)
{
    return extract(snaps.positions.at(time_index), snaps.n_particles,
                   snaps.dim, snaps.n_replicas, j, disjoint_tuples);
}

MarginalSamples extract_marginal_samples(ParticleEnsemble const& ens, int j,
                                         bool disjoint_tuples)
{
    return extract(ens.positions, ens.n_particles, ens.dim, ens.n_replicas, j,
                   disjoint_tuples);
}

namespace
{
constexpr char raw_magic[4] = {'C', 'L', 'P', 'S'};
constexpr std::uint32_t raw_version = 1;

template<class T>
void put(std::ofstream& os, T v)
{
    static_assert(std::endian::native == std::endian::little,
                  "raw snapshots assume a little-endian host");
    os.write(reinterpret_cast<char const*>(&v), sizeof(T));
}

template<class T>
T get(std::ifstream& is)
{
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
}  // namespace

void write_snapshots(Snapshots const& snaps, std::string const& path,
                     SnapshotFormat format)
{
    if (format == SnapshotFormat::csv)
    {
        std::ofstream os(path);
        os << "replica,time,particle,coord0" << (snaps.dim == 2 ? ",coord1" : "")
           << "\n";
        os.precision(17);
        for (std::size_t t = 0; t < snaps.times.size(); ++t)
            for (int r = 0; r < snaps.n_replicas; ++r)
                for (int p = 0; p < snaps.n_particles; ++p)
                {
                    os << r << "," << snaps.times[t] << "," << p;
                    for (int c = 0; c < snaps.dim; ++c)
                        os << ","
                           << snaps.positions[t][(static_cast<std::size_t>(r)
                                                      * snaps.n_particles
                                                  + p) * snaps.dim + c];
                    os << "\n";
                }
        if (!os)
            throw std::runtime_error("failed writing " + path);
        return;
    }
    std::ofstream os(path, std::ios::binary);
    os.write(raw_magic, 4);
    put<std::uint32_t>(os, raw_version);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(snaps.n_particles));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(snaps.dim));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(snaps.n_replicas));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(snaps.times.size()));
    put<std::uint64_t>(os, 0);
    for (double t : snaps.times)
        put(os, t);
    for (auto const& frame : snaps.positions)
        os.write(reinterpret_cast<char const*>(frame.data()),
                 static_cast<std::streamsize>(frame.size() * sizeof(double)));
    if (!os)
        throw std::runtime_error("failed writing " + path);
}

Snapshots read_snapshots_raw(std::string const& path)
{
    std::ifstream is(path, std::ios::binary);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, raw_magic, 4) != 0)
        throw std::runtime_error("not a raw snapshot file: " + path);
    if (get<std::uint32_t>(is) != raw_version)
        throw std::runtime_error("unsupported raw snapshot version");
    Snapshots s;
    s.n_particles = static_cast<int>(get<std::uint32_t>(is));
    s.dim = static_cast<int>(get<std::uint32_t>(is));
    s.n_replicas = static_cast<int>(get<std::uint32_t>(is));
    auto const n_times = get<std::uint32_t>(is);
    get<std::uint64_t>(is);
    for (std::uint32_t t = 0; t < n_times; ++t)
        s.times.push_back(get<double>(is));
    std::size_t const frame = static_cast<std::size_t>(s.n_particles) * s.dim
                              * s.n_replicas;
    for (std::uint32_t t = 0; t < n_times; ++t)
    {
        std::vector<double> v(frame);
        is.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(frame * sizeof(double)));
        s.positions.push_back(std::move(v));
    }
    if (!is)
        throw std::runtime_error("truncated raw snapshot file: " + path);
    return s;
}

}  // namespace chaoslab
