#include "pitch/signal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pitch/errors.hpp"
#include "pitch/fft.hpp"
#include "pitch/rng.hpp"

namespace pitch {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLsRcondLimit = 1e-10;
}  // namespace

double wrap_phase(double phi) {
  double y = std::fmod(phi + kPi, 2.0 * kPi);
  if (y < 0.0) y += 2.0 * kPi;
  return y - kPi;
}

SinusoidSet SinusoidSet::from_components(std::vector<Sinusoid> comps) {
  std::vector<Sinusoid> kept;
  kept.reserve(comps.size());
  for (const auto& c : comps) {
    if (!std::isfinite(c.amplitude) || !std::isfinite(c.phase) ||
        !std::isfinite(c.frequency))
      throw std::invalid_argument("SinusoidSet: non-finite component");
    if (c.amplitude < 0.0)
      throw std::invalid_argument("SinusoidSet: negative amplitude");
    if (c.amplitude == 0.0) continue;
    kept.push_back({c.amplitude, wrap_phase(c.phase), c.frequency});
  }
  std::sort(kept.begin(), kept.end(),
            [](const Sinusoid& a, const Sinusoid& b) {
              return a.frequency < b.frequency;
            });
  for (std::size_t k = 1; k < kept.size(); ++k) {
    if (!(kept[k].frequency > kept[k - 1].frequency))
      throw std::invalid_argument("SinusoidSet: duplicate frequency");
  }
  SinusoidSet s;
  s.comps_ = std::move(kept);
  return s;
}

SinusoidSet SinusoidSet::from_arrays(const std::vector<double>& freqs,
                                     const std::vector<double>& amps,
                                     const std::vector<double>& phases) {
  if (freqs.size() != amps.size() || freqs.size() != phases.size())
    throw std::invalid_argument("SinusoidSet: array size mismatch");
  std::vector<Sinusoid> comps(freqs.size());
  for (std::size_t k = 0; k < freqs.size(); ++k)
    comps[k] = {amps[k], phases[k], freqs[k]};
  return from_components(std::move(comps));
}

std::vector<double> SinusoidSet::frequencies() const {
  std::vector<double> v(comps_.size());
  for (std::size_t k = 0; k < comps_.size(); ++k) v[k] = comps_[k].frequency;
  return v;
}

std::vector<double> SinusoidSet::amplitudes() const {
  std::vector<double> v(comps_.size());
  for (std::size_t k = 0; k < comps_.size(); ++k) v[k] = comps_[k].amplitude;
  return v;
}

std::vector<double> SinusoidSet::phases() const {
  std::vector<double> v(comps_.size());
  for (std::size_t k = 0; k < comps_.size(); ++k) v[k] = comps_[k].phase;
  return v;
}

void HarmonicModelParams::validate() const {
  const std::size_t L = amplitudes.size();
  if (L == 0 || phases.size() != L)
    throw std::invalid_argument("HarmonicModelParams: need L >= 1 matched arrays");
  if (!(omega0 > 0.0) || !(static_cast<double>(L) * omega0 < kPi))
    throw std::invalid_argument(
        "HarmonicModelParams: need 0 < omega0 and L*omega0 < pi");
  for (double r : amplitudes)
    if (!(r >= 0.0) || !std::isfinite(r))
      throw std::invalid_argument("HarmonicModelParams: bad amplitude");
  for (double p : phases)
    if (!std::isfinite(p))
      throw std::invalid_argument("HarmonicModelParams: bad phase");
}

void StochasticPitchModel::validate() const {
  const std::size_t K = amplitudes.size();
  if (K == 0 || phases.size() != K)
    throw std::invalid_argument("StochasticPitchModel: need K >= 1 matched arrays");
  if (!(omega0 > 0.0) || !(static_cast<double>(K) * omega0 < kPi))
    throw std::invalid_argument(
        "StochasticPitchModel: need k*omega0 in (0, pi) for k <= K");
  if (!(sigma2_delta >= 0.0) || !std::isfinite(sigma2_delta))
    throw std::invalid_argument("StochasticPitchModel: bad sigma2_delta");
  if (!(sigma2_noise > 0.0))
    throw std::invalid_argument("StochasticPitchModel: sigma2_noise must be > 0");
}

ComplexSignal synth_sinusoids(const SinusoidSet& s, std::size_t n) {
  if (n == 0) throw std::invalid_argument("synth_sinusoids: n must be >= 1");
  ComplexSignal x(n);
  for (const auto& c : s.components()) {
    for (std::size_t t = 0; t < n; ++t)
      x[t] += std::polar(c.amplitude,
                         c.phase + c.frequency * static_cast<double>(t));
  }
  return x;
}

std::vector<double> string_model_frequencies(double omega0, double beta,
                                             std::size_t k_count) {
  if (k_count == 0)
    throw std::invalid_argument("string_model_frequencies: k_count must be >= 1");
  if (!(omega0 > 0.0) || !(beta >= 0.0))
    throw std::invalid_argument(
        "string_model_frequencies: need omega0 > 0 and beta >= 0");
  const double kd = static_cast<double>(k_count);
  if (!(kd * omega0 * std::sqrt(1.0 + kd * kd * beta) < kPi))
    throw std::invalid_argument(
        "string_model_frequencies: top frequency reaches or exceeds pi");
  std::vector<double> freqs(k_count);
  for (std::size_t k = 1; k <= k_count; ++k) {
    const double kk = static_cast<double>(k);
    freqs[k - 1] = kk * omega0 * std::sqrt(1.0 + kk * kk * beta);
  }
  return freqs;
}

std::vector<double> draw_inharmonicity(const StochasticPitchModel& model,
                                       std::uint64_t seed) {
  model.validate();
  const std::size_t K = model.harmonic_count();
  std::vector<double> delta(K, 0.0);
  if (model.sigma2_delta == 0.0) return delta;
  RngStream rng(seed);
  const double sd = std::sqrt(model.sigma2_delta);
  for (std::size_t k = 0; k < K; ++k) delta[k] = sd * rng.normal();
  return delta;
}

ComplexSignal add_noise(const ComplexSignal& x, double sigma2,
                        std::uint64_t seed) {
  if (!(sigma2 > 0.0))
    throw std::invalid_argument("add_noise: sigma2 must be > 0");
  RngStream rng(seed);
  ComplexSignal y(x.size());
  for (std::size_t t = 0; t < x.size(); ++t)
    y[t] = x[t] + rng.complex_normal(sigma2);
  return y;
}

double snr_to_noise_var(std::span<const double> amplitudes, double snr_db) {
  double power = 0.0;
  for (double r : amplitudes) power += r * r;
  if (!(power > 0.0))
    throw std::invalid_argument("snr_to_noise_var: all amplitudes are zero");
  return power / std::pow(10.0, snr_db / 10.0);
}

std::vector<cplx> ls_amp_phase(const ComplexSignal& y,
                               std::span<const double> freqs) {
  const std::size_t n = y.size();
  const std::size_t k = freqs.size();
  if (k == 0) return {};
  if (k > n)
    throw std::invalid_argument("ls_amp_phase: more frequencies than samples");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (freqs[i] == freqs[j])
        throw std::invalid_argument("ls_amp_phase: duplicate frequency");

  Eigen::MatrixXcd a(n, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t t = 0; t < n; ++t)
      a(t, j) = std::polar(1.0, freqs[j] * static_cast<double>(t));
  Eigen::Map<const Eigen::VectorXcd> yv(y.samples.data(), n);

  const Eigen::MatrixXcd gram = a.adjoint() * a;
  const Eigen::VectorXcd rhs = a.adjoint() * yv;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  const auto& ev = es.eigenvalues();
  const double rcond = ev(ev.size() - 1) > 0.0 ? ev(0) / ev(ev.size() - 1) : 0.0;
  if (!(rcond >= kLsRcondLimit))
    throw ConditioningError("ls_amp_phase: frequencies too close", rcond);

  const Eigen::VectorXcd c =
      es.eigenvectors() *
      (es.eigenvalues().cwiseInverse().asDiagonal() *
       (es.eigenvectors().adjoint() * rhs));
  return {c.data(), c.data() + k};
}

std::vector<double> periodogram(const ComplexSignal& y, std::size_t grid_size) {
  if (grid_size < y.size() || grid_size == 0)
    throw std::invalid_argument("periodogram: grid_size must be >= N");
  const auto spec = dft_forward(y.samples, grid_size);
  std::vector<double> p(grid_size);
  const double inv_n = 1.0 / static_cast<double>(y.size());
  for (std::size_t g = 0; g < grid_size; ++g) p[g] = std::norm(spec[g]) * inv_n;
  return p;
}

cplx dirichlet_sum(double delta, std::size_t n) {
  const double nd = static_cast<double>(n);
  const double half = 0.5 * delta;
  const double s = std::sin(half);
  if (std::abs(s) < 1e-14) return {nd, 0.0};
  const double ratio = std::sin(nd * half) / s;
  return std::polar(ratio, half * (nd - 1.0));
}

std::vector<cplx> dft_at(const ComplexSignal& y, std::span<const double> freqs) {
  std::vector<cplx> out(freqs.size());
  const std::size_t n = y.size();
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    const cplx step = std::polar(1.0, -freqs[j]);
    cplx phasor(1.0, 0.0);
    cplx acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      acc += y[t] * phasor;
      phasor *= step;
      if ((t & 1023u) == 1023u) phasor /= std::abs(phasor);
    }
    out[j] = acc;
  }
  return out;
}

}  // namespace pitch
