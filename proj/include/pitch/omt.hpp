#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pitch {

/// One point mass of a line spectrum. `power` is transportable mass; spectra
/// built from sinusoid amplitudes carry the 2*pi*r^2 normalization explicitly.
struct SpectrumAtom {
  double frequency = 0.0;  // in (0, pi)
  double power = 0.0;      // > 0
};

/// Discrete spectrum: strictly increasing frequencies, positive masses.
class LineSpectrum {
public:
  LineSpectrum() = default;

  static LineSpectrum from_atoms(std::vector<SpectrumAtom> atoms);

  /// Atom k gets mass 2*pi*amps[k]^2; zero amplitudes are dropped.
  static LineSpectrum from_amplitudes(std::span<const double> freqs,
                                      std::span<const double> amps);

  const std::vector<SpectrumAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const;
  std::vector<double> frequencies() const;

private:
  std::vector<SpectrumAtom> atoms_;
};

struct TransportEntry {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
};

/// How mass moves between two spectra. Row sums reproduce source masses and
/// column sums target masses.
struct TransportPlan {
  std::vector<TransportEntry> entries;
};

struct OmtResult {
  double cost = 0.0;
  TransportPlan plan;
};

/// Closest harmonic spectrum and the search diagnostics around it.
struct ChsResult {
  double omega0 = 0.0;
  std::size_t order = 0;                 // L
  double cost = 0.0;                     // q_L(omega0)
  std::vector<double> harmonic_powers;   // mass per harmonic l = 1..L
  std::vector<std::vector<std::size_t>> assignment;  // atom indices per harmonic
  bool tie_flagged = false;      // another omega0 attains exactly the same cost
  bool ambiguous = false;        // a distinct local minimum within 1% of optimum
  std::vector<double> competing_minima;
};

/// Harmonic order from the minimum consecutive-component distance d:
/// the smallest l with l*d >= max frequency.
std::size_t maximal_harmonic_order(std::span<const double> freqs);

/// Nearest multiple of omega0 to freq within {1..order}; ties take the
/// smaller multiple.
std::size_t nearest_harmonic(double omega0, double freq, std::size_t order);

/// Transport cost to the best harmonic spectrum at fixed omega0:
///   sum_k mass_k * min_{l=1..order} (l*omega0 - w_k)^2.
double q_cost(double omega0, const LineSpectrum& spectrum, std::size_t order);

/// Minimizes q_cost over omega0 (grid over the assignment cells, each resolved
/// by its closed-form stationary point). Order defaults to
/// maximal_harmonic_order.
ChsResult chs(const LineSpectrum& spectrum,
              std::optional<std::size_t> order = std::nullopt);

/// Exact optimal transport between equal-mass discrete spectra under the
/// squared-distance ground cost; in 1-D the monotone (north-west-corner on
/// sorted atoms) plan is optimal. Rejects total-mass mismatch beyond 1e-9
/// relative.
OmtResult omt_distance(const LineSpectrum& phi0, const LineSpectrum& phi1);

}  // namespace pitch
