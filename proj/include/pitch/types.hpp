#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pitch {

using cplx = std::complex<double>;

/// Wrap an angle into [-pi, pi).
double wrap_phase(double phi);

struct Sinusoid {
  double amplitude = 0.0;  // > 0 inside a SinusoidSet
  double phase = 0.0;      // radians, [-pi, pi)
  double frequency = 0.0;  // radians/sample, [-pi, pi)
};

/// A set of sinusoidal components with strictly increasing frequencies.
/// Zero-amplitude components are dropped on construction, phases are wrapped.
class SinusoidSet {
public:
  SinusoidSet() = default;

  /// Normalizes and validates; throws std::invalid_argument on duplicate or
  /// non-finite frequencies or negative amplitudes.
  static SinusoidSet from_components(std::vector<Sinusoid> comps);

  /// Convenience: component k has amplitude amps[k], phase phases[k],
  /// frequency freqs[k].
  static SinusoidSet from_arrays(const std::vector<double>& freqs,
                                 const std::vector<double>& amps,
                                 const std::vector<double>& phases);

  const std::vector<Sinusoid>& components() const { return comps_; }
  std::size_t size() const { return comps_.size(); }
  bool empty() const { return comps_.empty(); }

  std::vector<double> frequencies() const;
  std::vector<double> amplitudes() const;
  std::vector<double> phases() const;

private:
  std::vector<Sinusoid> comps_;
};

/// A finite record of complex samples, t = 0..size()-1.
struct ComplexSignal {
  std::vector<cplx> samples;

  ComplexSignal() = default;
  explicit ComplexSignal(std::vector<cplx> s) : samples(std::move(s)) {}
  explicit ComplexSignal(std::size_t n) : samples(n) {}

  std::size_t size() const { return samples.size(); }
  cplx& operator[](std::size_t i) { return samples[i]; }
  const cplx& operator[](std::size_t i) const { return samples[i]; }
};

/// Parameters of a perfectly periodic waveform: L harmonics of omega0 with
/// per-harmonic phase and non-negative amplitude.
struct HarmonicModelParams {
  double omega0 = 0.0;
  std::vector<double> phases;
  std::vector<double> amplitudes;

  std::size_t order() const { return amplitudes.size(); }

  /// Throws std::invalid_argument unless L >= 1, sizes agree, 0 < omega0 and
  /// L*omega0 < pi, and all amplitudes are >= 0 and finite.
  void validate() const;
};

/// K components at frequencies k*omega0 + Delta_k, where the Delta_k are iid
/// N(0, sigma2_delta). sigma2_delta = 0 degenerates to a deterministic
/// harmonic model.
struct StochasticPitchModel {
  double omega0 = 0.0;
  std::vector<double> amplitudes;
  std::vector<double> phases;
  double sigma2_delta = 0.0;
  double sigma2_noise = 1.0;

  std::size_t harmonic_count() const { return amplitudes.size(); }
  void validate() const;
};

}  // namespace pitch
