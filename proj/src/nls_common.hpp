#pragma once

// Internal helpers shared by the estimators and the pseudo-true solver:
// concentrated projection residuals for harmonic and free frequency sets,
// and the FFT-gridded coarse scan they both start from.

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pitch/signal.hpp"
#include "pitch/types.hpp"

namespace pitch::detail {

inline double signal_energy(const ComplexSignal& y) {
  double e = 0.0;
  for (const auto& v : y.samples) e += std::norm(v);
  return e;
}

// ||y - A c||^2 minimized over c for columns exp(i w_j t). The Gram matrix is
// assembled from closed-form geometric sums, so the cost is O(K^2 + K N).
// Returns +inf when frequencies (nearly) collide.
inline double projection_residual(const ComplexSignal& y,
                                  std::span<const double> freqs,
                                  double energy) {
  const std::size_t k = freqs.size();
  const std::size_t n = y.size();
  const double min_gap = 2e-9;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::abs(freqs[i] - freqs[j]) < min_gap)
        return std::numeric_limits<double>::infinity();

  Eigen::MatrixXcd gram(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    gram(i, i) = static_cast<double>(n);
    for (std::size_t j = i + 1; j < k; ++j) {
      gram(i, j) = dirichlet_sum(freqs[j] - freqs[i], n);
      gram(j, i) = std::conj(gram(i, j));
    }
  }
  const auto rhs_v = dft_at(y, freqs);
  Eigen::Map<const Eigen::VectorXcd> rhs(rhs_v.data(), k);

  Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    return std::numeric_limits<double>::infinity();
  const Eigen::VectorXcd c = ldlt.solve(rhs);
  const double projected = rhs.dot(c).real();
  return std::max(0.0, energy - projected);
}

// Residual for a harmonic stack {l*omega0}.
inline double harmonic_residual(const ComplexSignal& y, double omega0,
                                std::size_t order, double energy) {
  std::vector<double> freqs(order);
  for (std::size_t l = 1; l <= order; ++l)
    freqs[l - 1] = static_cast<double>(l) * omega0;
  return projection_residual(y, freqs, energy);
}

struct CoarseGrid {
  std::size_t fft_size = 0;   // full-circle bins
  double step = 0.0;          // 2*pi / fft_size
  std::size_t g_min = 0;      // fundamental candidate range, inclusive
  std::size_t g_max = 0;
  std::vector<cplx> spectrum;      // Y on the FFT grid
  std::vector<double> power;       // |Y|^2

  double omega(std::size_t g) const { return static_cast<double>(g) * step; }
};

// Resolved fundamental search range and grid. Defaults: omega in
// [2*pi/N, pi/L] with spacing pi/(10*L*N), realized as an FFT grid of
// 20*L*N bins so that harmonic multiples of grid points are themselves bins.
CoarseGrid build_coarse_grid(const ComplexSignal& y, std::size_t order,
                             double omega_min, double omega_max,
                             double grid_step);

}  // namespace pitch::detail
