// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/particles/philox.hpp"

#include <cmath>
#include <numbers>

namespace chaoslab
{
namespace
{
constexpr std::uint32_t mult0 = 0xD2511F53u;
constexpr std::uint32_t mult1 = 0xCD9E8D57u;
constexpr std::uint32_t weyl0 = 0x9E3779B9u;
constexpr std::uint32_t weyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo)
{
    std::uint64_t const p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key)
{
    for (int round = 0; round < 10; ++round)
    {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(mult0, ctr[0], hi0, lo0);
        mulhilo(mult1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += weyl0;
        key[1] += weyl1;
    }
    return ctr;
}

Philox4x32::Key Philox4x32::make_key(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t const h = splitmix64(splitmix64(seed) ^ stream);
    return {static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
}

double uniform_open(std::uint32_t hi, std::uint32_t lo)
{
    std::uint64_t const bits
        = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

std::array<double, 2> uniform_pair(Philox4x32::Key key,
                                   Philox4x32::Counter ctr)
{
    auto const w = Philox4x32::generate(ctr, key);
    return {uniform_open(w[0], w[1]), uniform_open(w[2], w[3])};
}

std::array<double, 2> normal_pair(Philox4x32::Key key,
                                  Philox4x32::Counter ctr)
{
    auto const [u1, u2] = uniform_pair(key, ctr);
    double const r = std::sqrt(-2 * std::log(u1));
    double const a = 2 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace chaoslab
