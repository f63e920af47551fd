#include "pitch/omt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pitch {

namespace {
constexpr double kPi = std::numbers::pi;
}

LineSpectrum LineSpectrum::from_atoms(std::vector<SpectrumAtom> atoms) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.frequency) || !std::isfinite(a.power))
      throw std::invalid_argument("LineSpectrum: non-finite atom");
    if (!(a.power > 0.0))
      throw std::invalid_argument("LineSpectrum: atom power must be > 0");
    if (!(a.frequency > 0.0) || !(a.frequency < kPi))
      throw std::invalid_argument("LineSpectrum: frequency outside (0, pi)");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const SpectrumAtom& a, const SpectrumAtom& b) {
              return a.frequency < b.frequency;
            });
  for (std::size_t k = 1; k < atoms.size(); ++k)
    if (!(atoms[k].frequency > atoms[k - 1].frequency))
      throw std::invalid_argument("LineSpectrum: duplicate frequency");
  LineSpectrum s;
  s.atoms_ = std::move(atoms);
  return s;
}

LineSpectrum LineSpectrum::from_amplitudes(std::span<const double> freqs,
                                           std::span<const double> amps) {
  if (freqs.size() != amps.size())
    throw std::invalid_argument("LineSpectrum: array size mismatch");
  std::vector<SpectrumAtom> atoms;
  atoms.reserve(freqs.size());
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (amps[k] == 0.0) continue;
    atoms.push_back({freqs[k], 2.0 * kPi * amps[k] * amps[k]});
  }
  return from_atoms(std::move(atoms));
}

double LineSpectrum::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.power;
  return m;
}

std::vector<double> LineSpectrum::frequencies() const {
  std::vector<double> f(atoms_.size());
  for (std::size_t k = 0; k < atoms_.size(); ++k) f[k] = atoms_[k].frequency;
  return f;
}

std::size_t maximal_harmonic_order(std::span<const double> freqs) {
  if (freqs.empty())
    throw std::invalid_argument("maximal_harmonic_order: empty frequency set");
  if (!(freqs[0] > 0.0))
    throw std::invalid_argument("maximal_harmonic_order: frequencies must be > 0");
  double d = freqs[0];
  for (std::size_t k = 1; k < freqs.size(); ++k) {
    const double gap = freqs[k] - freqs[k - 1];
    if (!(gap > 0.0))
      throw std::invalid_argument(
          "maximal_harmonic_order: frequencies must be strictly increasing");
    d = std::min(d, gap);
  }
  const double top = freqs[freqs.size() - 1];
  // tolerance absorbs rounding in the gap subtraction for exactly harmonic sets
  std::size_t l = 1;
  while (static_cast<double>(l) * d < top * (1.0 - 1e-12)) ++l;
  return l;
}

std::size_t nearest_harmonic(double omega0, double freq, std::size_t order) {
  const double x = freq / omega0;
  const double lo = std::floor(x);
  std::size_t l_lo = lo < 1.0 ? 1 : static_cast<std::size_t>(lo);
  if (l_lo > order) l_lo = order;
  std::size_t l_hi = l_lo < order ? l_lo + 1 : order;
  const double d_lo = std::abs(static_cast<double>(l_lo) * omega0 - freq);
  const double d_hi = std::abs(static_cast<double>(l_hi) * omega0 - freq);
  return d_hi < d_lo ? l_hi : l_lo;  // ties take the smaller multiple
}

double q_cost(double omega0, const LineSpectrum& spectrum, std::size_t order) {
  if (order == 0) throw std::invalid_argument("q_cost: order must be >= 1");
  if (!(omega0 > 0.0)) throw std::invalid_argument("q_cost: omega0 must be > 0");
  double cost = 0.0;
  for (const auto& a : spectrum.atoms()) {
    const std::size_t l = nearest_harmonic(omega0, a.frequency, order);
    const double diff = static_cast<double>(l) * omega0 - a.frequency;
    cost += a.power * diff * diff;
  }
  return cost;
}

namespace {

// Closed-form minimizer of q under a fixed assignment {l_k}:
// omega* = sum_k m_k l_k w_k / sum_k m_k l_k^2.
double stationary_point(double omega0, const LineSpectrum& spectrum,
                        std::size_t order) {
  double num = 0.0, den = 0.0;
  for (const auto& a : spectrum.atoms()) {
    const double l =
        static_cast<double>(nearest_harmonic(omega0, a.frequency, order));
    num += a.power * l * a.frequency;
    den += a.power * l * l;
  }
  return num / den;
}

}  // namespace

ChsResult chs(const LineSpectrum& spectrum, std::optional<std::size_t> order) {
  if (spectrum.size() == 0)
    throw std::invalid_argument("chs: empty spectrum");
  const auto freqs = spectrum.frequencies();
  const std::size_t L = order ? *order : maximal_harmonic_order(freqs);
  if (L == 0) throw std::invalid_argument("chs: order must be >= 1");

  double d = freqs[0];
  for (std::size_t k = 1; k < freqs.size(); ++k)
    d = std::min(d, freqs[k] - freqs[k - 1]);
  const double top = freqs[freqs.size() - 1];

  // Assignment boundaries move on the d/L scale; scan cells and resolve each
  // by its closed-form stationary point.
  const double step = d / (100.0 * static_cast<double>(L));
  const double hi = top + d;
  const std::size_t cells = static_cast<std::size_t>(std::ceil(hi / step));

  const double mass_scale = spectrum.total_mass() * hi * hi;
  const double tie_tol = 1e-12 * mass_scale;

  double best_w = 0.0;
  double best_q = std::numeric_limits<double>::infinity();
  bool tie = false;

  auto consider = [&](double w) {
    if (!(w > 0.0)) return;
    const double q = q_cost(w, spectrum, L);
    if (q < best_q - tie_tol) {
      best_q = q;
      best_w = w;
      tie = false;
    } else if (std::abs(q - best_q) <= tie_tol &&
               std::abs(w - best_w) > 1e-9 * hi) {
      // equal cost at a distinct omega0: keep the smaller one, flag the tie
      tie = true;
      if (w < best_w) {
        best_w = w;
        best_q = std::min(best_q, q);
      }
    }
  };

  std::vector<double> grid_q(cells + 1,
                             std::numeric_limits<double>::infinity());
  for (std::size_t i = 1; i <= cells; ++i) {
    const double w = static_cast<double>(i) * step;
    grid_q[i] = q_cost(w, spectrum, L);
    consider(w);
    consider(stationary_point(w, spectrum, L));
  }

  // Competing local minima of the sampled cost, refined through their cells'
  // stationary points; flag any within 1% of the optimum but away from it.
  ChsResult result;
  for (std::size_t i = 2; i + 1 <= cells; ++i) {
    if (grid_q[i] < grid_q[i - 1] && grid_q[i] <= grid_q[i + 1]) {
      const double w_local =
          stationary_point(static_cast<double>(i) * step, spectrum, L);
      const double q_local = q_cost(w_local, spectrum, L);
      if (q_local <= best_q * 1.01 + tie_tol &&
          std::abs(w_local - best_w) > 10.0 * step) {
        result.competing_minima.push_back(w_local);
      }
    }
  }
  result.ambiguous = !result.competing_minima.empty();

  result.omega0 = best_w;
  result.order = L;
  result.cost = best_q;
  result.tie_flagged = tie;
  result.harmonic_powers.assign(L, 0.0);
  result.assignment.assign(L, {});
  const auto& atoms = spectrum.atoms();
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const std::size_t l = nearest_harmonic(best_w, atoms[k].frequency, L);
    result.harmonic_powers[l - 1] += atoms[k].power;
    result.assignment[l - 1].push_back(k);
  }
  return result;
}

OmtResult omt_distance(const LineSpectrum& phi0, const LineSpectrum& phi1) {
  const double m0 = phi0.total_mass();
  const double m1 = phi1.total_mass();
  if (std::abs(m0 - m1) > 1e-9 * std::max(m0, m1))
    throw std::invalid_argument("omt_distance: total masses differ");

  OmtResult r;
  const auto& a = phi0.atoms();
  const auto& b = phi1.atoms();
  std::size_t i = 0, j = 0;
  double ra = a.empty() ? 0.0 : a[0].power;
  double rb = b.empty() ? 0.0 : b[0].power;
  while (i < a.size() && j < b.size()) {
    const double move = std::min(ra, rb);
    if (move > 0.0) {
      const double diff = a[i].frequency - b[j].frequency;
      r.cost += move * diff * diff;
      r.plan.entries.push_back({i, j, move});
    }
    ra -= move;
    rb -= move;
    if (ra <= 0.0 && i + 1 < a.size()) ra = a[++i].power;
    else if (ra <= 0.0) ++i;
    if (rb <= 0.0 && j + 1 < b.size()) rb = b[++j].power;
    else if (rb <= 0.0) ++j;
  }
  return r;
}

}  // namespace pitch
