// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace chaoslab
{
//---------------------------------------------------------------------------//
/*!
 * Real-to-complex FFT on a rank-r cube of side M (FFTW backend).
 *
 * The spectrum uses FFTW's half-complex layout: the last axis keeps
 * M/2+1 frequencies. Transforms are unnormalized; `inverse` divides by the
 * total number of points so forward followed by inverse is the identity.
 */
class CubeFft
{
  public:
    CubeFft(int rank, int side);
    ~CubeFft();
    CubeFft(CubeFft const&) = delete;
    CubeFft& operator=(CubeFft const&) = delete;
    CubeFft(CubeFft&&) noexcept;
    CubeFft& operator=(CubeFft&&) noexcept;

    int rank() const { return rank_; }
    int side() const { return side_; }
    std::size_t real_size() const { return real_size_; }
    std::size_t spectral_size() const { return spectral_size_; }

    void forward(std::span<double const> in,
                 std::span<std::complex<double>> out) const;
    void inverse(std::span<std::complex<double> const> in,
                 std::span<double> out) const;

    //! Signed integer frequency of every spectral entry along each axis
    std::vector<std::vector<int>> const& frequencies() const
    {
        return freqs_;
    }

  private:
    struct Plans;
    int rank_ = 0;
    int side_ = 0;
    std::size_t real_size_ = 0;
    std::size_t spectral_size_ = 0;
    std::vector<std::vector<int>> freqs_;
    std::unique_ptr<Plans> plans_;
};

}  // namespace chaoslab
