#include "pitch/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nls_common.hpp"
#include "pitch/errors.hpp"
#include "pitch/fft.hpp"
#include "pitch/omt.hpp"
#include "pitch/optim.hpp"
#include "pitch/signal.hpp"

namespace pitch {

namespace {

constexpr double kPi = std::numbers::pi;

EstimateResult failed_estimate(std::string message, int iterations = 0) {
  EstimateResult r;
  r.omega0_hat = std::numeric_limits<double>::quiet_NaN();
  r.noise_var_hat = std::numeric_limits<double>::quiet_NaN();
  r.diagnostics.converged = false;
  r.diagnostics.iterations = iterations;
  r.diagnostics.message = std::move(message);
  return r;
}

int golden_budget(const SearchConfig& cfg) {
  return cfg.max_iterations > 0 ? cfg.max_iterations : 200;
}

// Amplitudes and phases by full least squares at the final frequencies.
// Returns false (with message) when the projection is ill-conditioned.
bool fill_components(const ComplexSignal& y, const std::vector<double>& freqs,
                     EstimateResult& r) {
  try {
    const auto coeffs = ls_amp_phase(y, freqs);
    r.components.resize(freqs.size());
    for (std::size_t k = 0; k < freqs.size(); ++k)
      r.components[k] = {std::abs(coeffs[k]), std::arg(coeffs[k]), freqs[k]};
    return true;
  } catch (const ConditioningError& e) {
    r.diagnostics.converged = false;
    r.diagnostics.message = e.what();
    return false;
  }
}

// K largest well-separated periodogram peaks, ascending in frequency.
// Separation: at least half the coarse harmonic-summation fundamental.
std::optional<std::vector<double>> pick_peaks(const detail::CoarseGrid& grid,
                                              std::size_t k_count) {
  // coarse fundamental for the separation rule
  std::size_t g0 = grid.g_min;
  double best = -1.0;
  for (std::size_t g = grid.g_min; g <= grid.g_max; ++g) {
    double sum = 0.0;
    for (std::size_t l = 1; l <= k_count; ++l) sum += grid.power[l * g];
    if (sum > best) {
      best = sum;
      g0 = g;
    }
  }
  const std::size_t sep =
      std::max<std::size_t>(1, g0 / 2);

  const std::size_t half = grid.fft_size / 2;
  std::vector<std::pair<double, std::size_t>> maxima;  // (-power, bin)
  for (std::size_t g = 1; g + 1 < half; ++g) {
    if (grid.power[g] > grid.power[g - 1] && grid.power[g] >= grid.power[g + 1])
      maxima.emplace_back(-grid.power[g], g);
  }
  std::sort(maxima.begin(), maxima.end());  // by power desc, then lower bin

  std::vector<std::size_t> kept;
  for (const auto& [negp, g] : maxima) {
    bool ok = true;
    for (std::size_t other : kept) {
      const std::size_t gap = g > other ? g - other : other - g;
      if (gap < sep) {
        ok = false;
        break;
      }
    }
    if (ok) {
      kept.push_back(g);
      if (kept.size() == k_count) break;
    }
  }
  if (kept.size() < k_count) return std::nullopt;
  std::sort(kept.begin(), kept.end());
  std::vector<double> freqs(k_count);
  for (std::size_t k = 0; k < k_count; ++k) freqs[k] = grid.omega(kept[k]);
  return freqs;
}

SimplexOptions simplex_options(const SearchConfig& cfg, std::size_t dim,
                               std::size_t n) {
  SimplexOptions opt;
  opt.initial_step = (2.0 * kPi / static_cast<double>(n)) / 4.0;
  opt.tol = cfg.refine_tol;
  opt.max_iter = cfg.max_iterations > 0 ? cfg.max_iterations
                                        : 800 * static_cast<int>(dim);
  opt.restarts = 1;
  return opt;
}

}  // namespace

namespace detail {

CoarseGrid build_coarse_grid(const ComplexSignal& y, std::size_t order,
                             double omega_min, double omega_max,
                             double grid_step) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("estimator: empty signal");
  if (order == 0) throw std::invalid_argument("estimator: order must be >= 1");
  if (order > n)
    throw std::invalid_argument("estimator: order exceeds sample count");

  const double nd = static_cast<double>(n);
  const double od = static_cast<double>(order);
  if (omega_min <= 0.0) omega_min = 2.0 * kPi / nd;
  if (omega_max <= 0.0) omega_max = kPi / od;
  if (grid_step <= 0.0) grid_step = kPi / (10.0 * od * nd);
  if (od * omega_max > kPi * (1.0 + 1e-12))
    throw std::invalid_argument("estimator: order * omega_max exceeds pi");
  if (!(omega_min < omega_max))
    throw std::invalid_argument("estimator: empty fundamental search range");

  CoarseGrid grid;
  grid.fft_size = std::max<std::size_t>(
      static_cast<std::size_t>(std::ceil(2.0 * kPi / grid_step)), n);
  grid.step = 2.0 * kPi / static_cast<double>(grid.fft_size);
  grid.g_min = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(omega_min / grid.step - 1e-9)));
  grid.g_max = std::min<std::size_t>(
      static_cast<std::size_t>(std::floor(omega_max / grid.step + 1e-9)),
      grid.fft_size / (2 * order));
  if (grid.g_min > grid.g_max)
    throw std::invalid_argument("estimator: fundamental grid is empty");

  grid.spectrum = dft_forward(y.samples, grid.fft_size);
  grid.power.resize(grid.fft_size);
  for (std::size_t g = 0; g < grid.fft_size; ++g)
    grid.power[g] = std::norm(grid.spectrum[g]);
  return grid;
}

}  // namespace detail

EstimateResult mmle_harmonic(const ComplexSignal& y, std::size_t order,
                             const SearchConfig& cfg) {
  const auto grid = detail::build_coarse_grid(y, order, cfg.omega_min,
                                              cfg.omega_max, cfg.grid_step);
  const double energy = detail::signal_energy(y);
  const std::size_t n = y.size();

  // coarse scan: Gram from closed-form geometric sums, rhs from FFT bins
  Eigen::MatrixXcd gram(order, order);
  Eigen::VectorXcd rhs(order);
  std::vector<cplx> diri(order);
  double best_res = std::numeric_limits<double>::infinity();
  std::size_t best_g = 0;
  int evaluations = 0;
  for (std::size_t g = grid.g_min; g <= grid.g_max; ++g) {
    const double w = grid.omega(g);
    for (std::size_t m = 1; m < order; ++m)
      diri[m] = dirichlet_sum(static_cast<double>(m) * w, n);
    for (std::size_t i = 0; i < order; ++i) {
      gram(i, i) = static_cast<double>(n);
      for (std::size_t j = i + 1; j < order; ++j) {
        gram(i, j) = diri[j - i];
        gram(j, i) = std::conj(diri[j - i]);
      }
      rhs(i) = grid.spectrum[(i + 1) * g];
    }
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) continue;
    const double projected = rhs.dot(ldlt.solve(rhs)).real();
    const double res = energy - projected;
    ++evaluations;
    if (res < best_res) {
      best_res = res;
      best_g = g;
    }
  }
  if (!std::isfinite(best_res))
    return failed_estimate(
        "mmle_harmonic: no grid point admits a well-conditioned projection",
        evaluations);

  const auto refined = golden_minimize(
      [&](double w) { return detail::harmonic_residual(y, w, order, energy); },
      grid.omega(best_g) - grid.step, grid.omega(best_g) + grid.step,
      cfg.refine_tol, golden_budget(cfg));

  EstimateResult r;
  r.omega0_hat = refined.x;
  r.noise_var_hat = refined.value / static_cast<double>(n);
  r.diagnostics.iterations = evaluations + refined.iterations;
  r.diagnostics.criterion = refined.value;
  r.diagnostics.converged = true;
  std::vector<double> freqs(order);
  for (std::size_t l = 1; l <= order; ++l)
    freqs[l - 1] = static_cast<double>(l) * refined.x;
  if (!fill_components(y, freqs, r)) return r;
  return r;
}

EstimateResult anls(const ComplexSignal& y, std::size_t order,
                    const SearchConfig& cfg) {
  const auto grid = detail::build_coarse_grid(y, order, cfg.omega_min,
                                              cfg.omega_max, cfg.grid_step);
  const std::size_t n = y.size();

  double best_sum = -1.0;
  std::size_t best_g = grid.g_min;
  for (std::size_t g = grid.g_min; g <= grid.g_max; ++g) {
    double sum = 0.0;
    for (std::size_t l = 1; l <= order; ++l) sum += grid.power[l * g];
    if (sum > best_sum) {
      best_sum = sum;
      best_g = g;
    }
  }

  std::vector<double> freqs(order);
  auto harmonic_sum = [&](double w) {
    for (std::size_t l = 1; l <= order; ++l)
      freqs[l - 1] = static_cast<double>(l) * w;
    const auto vals = dft_at(y, freqs);
    double s = 0.0;
    for (const auto& v : vals) s += std::norm(v);
    return -s;
  };
  const auto refined = golden_minimize(
      harmonic_sum, grid.omega(best_g) - grid.step,
      grid.omega(best_g) + grid.step, cfg.refine_tol, golden_budget(cfg));

  EstimateResult r;
  r.omega0_hat = refined.x;
  const double energy = detail::signal_energy(y);
  r.noise_var_hat = detail::harmonic_residual(y, refined.x, order, energy) /
                    static_cast<double>(n);
  r.diagnostics.iterations =
      static_cast<int>(grid.g_max - grid.g_min + 1) + refined.iterations;
  r.diagnostics.criterion = -refined.value;
  r.diagnostics.converged = true;
  for (std::size_t l = 1; l <= order; ++l)
    freqs[l - 1] = static_cast<double>(l) * refined.x;
  if (!fill_components(y, freqs, r)) return r;
  return r;
}

EstimateResult unstructured_mle(const ComplexSignal& y, std::size_t k_count,
                                const SearchConfig& cfg) {
  const auto grid = detail::build_coarse_grid(y, k_count, cfg.omega_min,
                                              cfg.omega_max, cfg.grid_step);
  const auto peaks = pick_peaks(grid, k_count);
  if (!peaks)
    return failed_estimate("unstructured_mle: fewer than K resolvable peaks");

  const double energy = detail::signal_energy(y);
  const std::size_t n = y.size();
  auto objective = [&](std::span<const double> w) {
    for (double wi : w)
      if (!(wi > 0.0) || !(wi < kPi))
        return std::numeric_limits<double>::infinity();
    return detail::projection_residual(y, w, energy);
  };

  const auto nm =
      nelder_mead(objective, *peaks, simplex_options(cfg, k_count, n));

  std::vector<double> freqs = nm.x;
  std::sort(freqs.begin(), freqs.end());

  EstimateResult r;
  r.omega0_hat = freqs[0];
  r.noise_var_hat = nm.value / static_cast<double>(n);
  r.diagnostics.iterations = nm.iterations;
  r.diagnostics.criterion = nm.value;
  r.diagnostics.converged = nm.converged;
  if (!std::isfinite(nm.value))
    return failed_estimate("unstructured_mle: refinement collapsed components",
                           nm.iterations);
  if (!nm.converged)
    r.diagnostics.message = "unstructured_mle: simplex iteration limit reached";
  if (!fill_components(y, freqs, r)) return r;
  return r;
}

EstimateResult chs_plugin(const ComplexSignal& y, std::size_t k_count,
                          const SearchConfig& cfg) {
  EstimateResult u = unstructured_mle(y, k_count, cfg);
  if (!u.diagnostics.converged) {
    u.diagnostics.message = "chs_plugin: " + u.diagnostics.message;
    return u;
  }
  std::vector<double> freqs(k_count), amps(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    freqs[k] = u.components[k].frequency;
    amps[k] = u.components[k].amplitude;
  }
  LineSpectrum spectrum;
  try {
    spectrum = LineSpectrum::from_amplitudes(freqs, amps);
  } catch (const std::invalid_argument& e) {
    u.diagnostics.converged = false;
    u.diagnostics.message = std::string("chs_plugin: ") + e.what();
    return u;
  }
  if (spectrum.size() == 0) {
    u.diagnostics.converged = false;
    u.diagnostics.message = "chs_plugin: all estimated amplitudes are zero";
    return u;
  }
  const ChsResult c = chs(spectrum);
  u.omega0_hat = c.omega0;
  u.diagnostics.criterion = c.cost;
  if (c.tie_flagged)
    u.diagnostics.message = "chs_plugin: cost tie between candidate pitches";
  return u;
}

EstimateResult ml_map_hybrid(const ComplexSignal& y, std::size_t k_count,
                             double sigma2_delta, const SearchConfig& cfg) {
  if (!(sigma2_delta > 0.0))
    throw std::invalid_argument("ml_map_hybrid: sigma2_delta must be > 0");
  const auto grid = detail::build_coarse_grid(y, k_count, cfg.omega_min,
                                              cfg.omega_max, cfg.grid_step);
  const auto peaks = pick_peaks(grid, k_count);
  if (!peaks)
    return failed_estimate("ml_map_hybrid: fewer than K resolvable peaks");

  const double energy = detail::signal_energy(y);
  const std::size_t n = y.size();
  const double nd = static_cast<double>(n);
  double sum_k2 = 0.0;
  for (std::size_t k = 1; k <= k_count; ++k)
    sum_k2 += static_cast<double>(k * k);

  auto weighted_omega0 = [&](std::span<const double> w) {
    double s = 0.0;
    for (std::size_t k = 0; k < k_count; ++k)
      s += static_cast<double>(k + 1) * w[k];
    return s / sum_k2;
  };

  // minimize -psi = N log Sigma + nu / (2 sigma2_delta)
  auto objective = [&](std::span<const double> w) {
    for (double wi : w)
      if (!(wi > 0.0) || !(wi < kPi))
        return std::numeric_limits<double>::infinity();
    const double res = detail::projection_residual(y, w, energy);
    if (!std::isfinite(res)) return res;
    const double sigma = std::max(res, 1e-280) / nd;
    const double w0 = weighted_omega0(w);
    double nu = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      const double d = w[k] - static_cast<double>(k + 1) * w0;
      nu += d * d;
    }
    return nd * std::log(sigma) + nu / (2.0 * sigma2_delta);
  };

  const auto opts = simplex_options(cfg, k_count, n);
  SimplexResult nm = nelder_mead(objective, *peaks, opts);

  // second start projected onto the harmonic stack; helps in the stiff
  // small-sigma2_delta regime where the optimum hugs the harmonic manifold
  const double w0_init = weighted_omega0(*peaks);
  if (w0_init > 0.0 && static_cast<double>(k_count) * w0_init < kPi) {
    std::vector<double> harmonic_start(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
      harmonic_start[k] = static_cast<double>(k + 1) * w0_init;
    SimplexResult nm2 = nelder_mead(objective, harmonic_start, opts);
    nm2.iterations += nm.iterations;
    if (nm2.value < nm.value) nm = std::move(nm2);
    else nm.iterations = nm2.iterations;
  }

  if (!std::isfinite(nm.value))
    return failed_estimate("ml_map_hybrid: criterion stayed degenerate",
                           nm.iterations);

  const std::vector<double>& freqs = nm.x;  // k-th entry pairs with multiple k+1
  const double w0 = weighted_omega0(freqs);
  std::vector<double> delta(k_count);
  for (std::size_t k = 0; k < k_count; ++k)
    delta[k] = freqs[k] - static_cast<double>(k + 1) * w0;

  EstimateResult r;
  r.omega0_hat = w0;
  r.noise_var_hat =
      detail::projection_residual(y, freqs, energy) / nd;
  r.delta_hat = std::move(delta);
  r.diagnostics.iterations = nm.iterations;
  r.diagnostics.criterion = -nm.value;
  r.diagnostics.converged = nm.converged;
  if (!nm.converged)
    r.diagnostics.message = "ml_map_hybrid: simplex iteration limit reached";
  if (!fill_components(y, freqs, r)) return r;
  return r;
}

}  // namespace pitch
