// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace chaoslab
{
/*!
 * Philox4x32-10 counter-based generator.
 *
 * Output depends only on (key, counter), so any draw can be regenerated
 * without replaying a stream.
 */
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key);

    //! Key derived from a 64-bit seed and a stream index
    static Key make_key(std::uint64_t seed, std::uint64_t stream);
};

//! 52-bit uniform in (0, 1) from two 32-bit words
double uniform_open(std::uint32_t hi, std::uint32_t lo);

/*!
 * Two independent standard normals via Box-Muller from one Philox block.
 */
std::array<double, 2> normal_pair(Philox4x32::Key key,
                                  Philox4x32::Counter ctr);

//! Two independent uniforms in (0, 1) from one Philox block
std::array<double, 2> uniform_pair(Philox4x32::Key key,
                                   Philox4x32::Counter ctr);

}  // namespace chaoslab
