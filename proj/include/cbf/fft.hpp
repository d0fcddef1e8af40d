/// @file fft.hpp
/// @brief FFTW-backed real 3D transforms with a process-wide plan cache.

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace cbf::fft {

/// Planner settings. Deterministic mode plans with FFTW_ESTIMATE so that the
/// chosen algorithm (and hence the rounding) does not depend on timing.
/// Must be called before the first transform; later calls reset the cache.
void configure(int threads, bool deterministic);
int threads();
bool deterministic();

/// Unnormalized backward c2r: out[j] = sum_k half[k] e^{+2 pi i j.k/n}.
/// half has n*n*(n/2+1) entries and is consumed (FFTW may overwrite it).
void inverse_r2c(int n, std::span<std::complex<double>> half, std::span<double> out);

/// Unnormalized forward r2c: half[k] = sum_j in[j] e^{-2 pi i j.k/n}.
void forward_r2c(int n, std::span<const double> in, std::span<std::complex<double>> half);

}  // namespace cbf::fft
