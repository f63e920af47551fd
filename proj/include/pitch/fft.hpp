#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pitch/types.hpp"

namespace pitch {

/// Zero-padded forward DFT of length n >= x.size():
///   X[g] = sum_t x[t] * exp(-i 2*pi*g*t / n),  g = 0..n-1.
/// Backed by FFTW with deterministic (FFTW_ESTIMATE) planning; safe to call
/// concurrently.
std::vector<cplx> dft_forward(std::span<const cplx> x, std::size_t n);

}  // namespace pitch
