#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pitch/types.hpp"

namespace pitch {

/// Search controls shared by the estimators. Zero means "derive the default
/// from (N, model order)": omega in [2*pi/N, pi/order] with grid spacing
/// pi/(10*order*N).
struct SearchConfig {
  double omega_min = 0.0;
  double omega_max = 0.0;
  double grid_step = 0.0;
  double refine_tol = 1e-10;  // radians
  int max_iterations = 0;     // 0: per-algorithm default
};

struct EstimateDiagnostics {
  int iterations = 0;
  double criterion = 0.0;
  bool converged = false;
  std::string message;
};

struct EstimateResult {
  double omega0_hat = 0.0;
  std::vector<Sinusoid> components;  // per-component (amplitude, phase, frequency)
  double noise_var_hat = 0.0;
  std::optional<std::vector<double>> delta_hat;  // ML/MAP only
  EstimateDiagnostics diagnostics;
};

/// Nonlinear least squares under a harmonic model: omega0 minimizes the
/// residual of projecting y onto {l*omega0, l = 1..order}. This is the MLE of
/// the (possibly misspecified) harmonic model.
EstimateResult mmle_harmonic(const ComplexSignal& y, std::size_t order,
                             const SearchConfig& cfg = {});

/// Approximate NLS: harmonic summation of |Y(l*omega0)|^2 over the grid,
/// locally refined.
EstimateResult anls(const ComplexSignal& y, std::size_t order,
                    const SearchConfig& cfg = {});

/// Joint maximum likelihood for k_count unconstrained sinusoids, initialized
/// from the k_count largest well-separated periodogram peaks and refined by
/// simplex descent.
EstimateResult unstructured_mle(const ComplexSignal& y, std::size_t k_count,
                                const SearchConfig& cfg = {});

/// Plug-in estimate of the transport-optimal pitch: unstructured_mle, then
/// the closest-harmonic-spectrum fundamental of the estimated line spectrum.
EstimateResult chs_plugin(const ComplexSignal& y, std::size_t k_count,
                          const SearchConfig& cfg = {});

/// Hybrid ML/MAP under random inharmonicity: maximizes
///   psi(w) = -N log Sigma(w) - nu(w) / (2*sigma2_delta)
/// over k_count free frequencies, where Sigma is the concentrated residual
/// power and nu the squared deviation from the best harmonic stack. Reports
/// omega0 = sum_k k*w_k / sum_k k^2 and delta_k = w_k - k*omega0.
EstimateResult ml_map_hybrid(const ComplexSignal& y, std::size_t k_count,
                             double sigma2_delta, const SearchConfig& cfg = {});

}  // namespace pitch
