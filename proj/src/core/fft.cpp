// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/core/fft.hpp"

#include <algorithm>
#include <fftw3.h>
#include <mutex>
#include <stdexcept>

namespace chaoslab
{
namespace
{
// FFTW planning is not thread safe.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
}  // namespace

struct CubeFft::Plans
{
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    double* real_buf = nullptr;
    fftw_complex* spec_buf = nullptr;

    ~Plans()
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (forward)
            fftw_destroy_plan(forward);
        if (inverse)
            fftw_destroy_plan(inverse);
        fftw_free(real_buf);
        fftw_free(spec_buf);
    }
};

CubeFft::CubeFft(int rank, int side) : rank_(rank), side_(side)
{
    if (rank < 1 || side < 2)
        throw std::invalid_argument("FFT needs rank >= 1 and side >= 2");
    real_size_ = 1;
    for (int a = 0; a < rank; ++a)
        real_size_ *= side;
    spectral_size_ = real_size_ / side * (side / 2 + 1);

    std::vector<int> dims(rank, side);
    plans_ = std::make_unique<Plans>();
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plans_->real_buf = fftw_alloc_real(real_size_);
        plans_->spec_buf = fftw_alloc_complex(spectral_size_);
        plans_->forward = fftw_plan_dft_r2c(
            rank, dims.data(), plans_->real_buf, plans_->spec_buf, FFTW_ESTIMATE);
        plans_->inverse = fftw_plan_dft_c2r(
            rank, dims.data(), plans_->spec_buf, plans_->real_buf, FFTW_ESTIMATE);
    }

    // Frequencies of each spectral entry per axis.
    freqs_.assign(rank, std::vector<int>(spectral_size_));
    int const half = side / 2 + 1;
    for (std::size_t idx = 0; idx < spectral_size_; ++idx)
    {
        std::size_t rest = idx;
        for (int a = rank - 1; a >= 0; --a)
        {
            int const extent = (a == rank - 1) ? half : side;
            int const k = static_cast<int>(rest % extent);
            rest /= extent;
            freqs_[a][idx] = (a == rank - 1 || k <= side / 2) ? k : k - side;
        }
    }
}

CubeFft::~CubeFft() = default;
CubeFft::CubeFft(CubeFft&&) noexcept = default;
CubeFft& CubeFft::operator=(CubeFft&&) noexcept = default;

void CubeFft::forward(std::span<double const> in,
                      std::span<std::complex<double>> out) const
{
    if (in.size() != real_size_ || out.size() != spectral_size_)
        throw std::invalid_argument("FFT buffer size mismatch");
    std::copy(in.begin(), in.end(), plans_->real_buf);
    fftw_execute_dft_r2c(plans_->forward, plans_->real_buf, plans_->spec_buf);
    auto const* src = reinterpret_cast<std::complex<double> const*>(
        plans_->spec_buf);
    std::copy(src, src + spectral_size_, out.begin());
}

void CubeFft::inverse(std::span<std::complex<double> const> in,
                      std::span<double> out) const
{
    if (out.size() != real_size_ || in.size() != spectral_size_)
        throw std::invalid_argument("FFT buffer size mismatch");
    auto* dst = reinterpret_cast<std::complex<double>*>(plans_->spec_buf);
    std::copy(in.begin(), in.end(), dst);
    // c2r destroys its input; the staging buffer absorbs that.
    fftw_execute_dft_c2r(plans_->inverse, plans_->spec_buf, plans_->real_buf);
    double const scale = 1.0 / static_cast<double>(real_size_);
    for (std::size_t i = 0; i < real_size_; ++i)
        out[i] = plans_->real_buf[i] * scale;
}

}  // namespace chaoslab
