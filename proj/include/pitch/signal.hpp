#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pitch/types.hpp"

namespace pitch {

/// Noiseless synthesis: sample t is sum_k r_k * exp(i*phi_k + i*w_k*t).
ComplexSignal synth_sinusoids(const SinusoidSet& s, std::size_t n);

/// Stiff-string frequencies w_k = k*omega0*sqrt(1 + k^2*beta), k = 1..k_count.
/// Rejects parameter sets that push the top frequency to or beyond pi.
std::vector<double> string_model_frequencies(double omega0, double beta,
                                             std::size_t k_count);

/// K independent N(0, sigma2_delta) draws; exact zeros when sigma2_delta = 0.
std::vector<double> draw_inharmonicity(const StochasticPitchModel& model,
                                       std::uint64_t seed);

/// y_t = x_t + e_t with e_t circularly symmetric complex Gaussian of variance
/// sigma2 (sigma2/2 per real/imaginary part). Deterministic per seed.
ComplexSignal add_noise(const ComplexSignal& x, double sigma2,
                        std::uint64_t seed);

/// sigma2 = sum_k r_k^2 / 10^(snr_db/10). Rejects all-zero amplitudes.
double snr_to_noise_var(std::span<const double> amplitudes, double snr_db);

/// Least-squares complex amplitudes: solves (A^H A) c = A^H y where column k
/// of A is exp(i*freqs[k]*t). Throws ConditioningError when the reciprocal
/// condition number of A^H A is below 1e-10.
std::vector<cplx> ls_amp_phase(const ComplexSignal& y,
                               std::span<const double> freqs);

/// Periodogram |sum_t y_t e^{-i w t}|^2 / N on the uniform full-circle grid
/// w_g = 2*pi*g/grid_size, g = 0..grid_size-1. Requires grid_size >= N.
std::vector<double> periodogram(const ComplexSignal& y, std::size_t grid_size);

/// sum_{t=0}^{n-1} e^{i*delta*t} in closed form (geometric/Dirichlet sum).
cplx dirichlet_sum(double delta, std::size_t n);

/// Direct evaluation of Y(w) = sum_t y_t e^{-i w t} at arbitrary frequencies.
std::vector<cplx> dft_at(const ComplexSignal& y, std::span<const double> freqs);

}  // namespace pitch
