#include "pitch/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nls_common.hpp"
#include "pitch/errors.hpp"
#include "pitch/optim.hpp"
#include "pitch/signal.hpp"

namespace pitch {

namespace {

constexpr double kPi = std::numbers::pi;

double sum_t(std::size_t n) {  // sum of t over 0..n-1
  const double nd = static_cast<double>(n);
  return nd * (nd - 1.0) / 2.0;
}

double sum_t2(std::size_t n) {  // sum of t^2 over 0..n-1
  const double nd = static_cast<double>(n);
  return nd * (nd - 1.0) * (2.0 * nd - 1.0) / 6.0;
}

// Symmetric inverse with a conditioning report.
Eigen::MatrixXd invert_symmetric(const Eigen::MatrixXd& m, double* rcond_out,
                                 const char* who) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto& ev = es.eigenvalues();
  const double max_abs = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  double min_abs = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    min_abs = std::min(min_abs, std::abs(ev(i)));
  const double rcond = max_abs > 0.0 ? min_abs / max_abs : 0.0;
  if (rcond_out) *rcond_out = rcond;
  if (!(rcond > 1e-13))
    throw ConditioningError(std::string(who) + ": matrix is singular", rcond);
  return es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

cplx harmonic_waveform(const HarmonicModelParams& p, double t) {
  cplx v(0.0, 0.0);
  for (std::size_t l = 1; l <= p.order(); ++l)
    v += std::polar(p.amplitudes[l - 1],
                    p.phases[l - 1] + static_cast<double>(l) * p.omega0 * t);
  return v;
}

void harmonic_waveform_gradient(const HarmonicModelParams& p, double t,
                                Eigen::VectorXd& grad_re,
                                Eigen::VectorXd& grad_im) {
  const std::size_t L = p.order();
  grad_re.setZero(2 * L + 1);
  grad_im.setZero(2 * L + 1);
  for (std::size_t l = 1; l <= L; ++l) {
    const double ld = static_cast<double>(l);
    const double alpha = p.phases[l - 1] + ld * p.omega0 * t;
    const double r = p.amplitudes[l - 1];
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    grad_re(0) += -r * ld * t * s;
    grad_im(0) += r * ld * t * c;
    grad_re(l) = -r * s;
    grad_im(l) = r * c;
    grad_re(L + l) = c;
    grad_im(L + l) = s;
  }
}

void harmonic_waveform_hessian(const HarmonicModelParams& p, double t,
                               Eigen::MatrixXd& hess_re,
                               Eigen::MatrixXd& hess_im) {
  const std::size_t L = p.order();
  hess_re.setZero(2 * L + 1, 2 * L + 1);
  hess_im.setZero(2 * L + 1, 2 * L + 1);
  for (std::size_t l = 1; l <= L; ++l) {
    const double ld = static_cast<double>(l);
    const double alpha = p.phases[l - 1] + ld * p.omega0 * t;
    const double r = p.amplitudes[l - 1];
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);

    hess_re(0, 0) += -r * ld * ld * t * t * c;
    hess_im(0, 0) += -r * ld * ld * t * t * s;

    hess_re(0, l) = hess_re(l, 0) = -r * ld * t * c;
    hess_im(0, l) = hess_im(l, 0) = -r * ld * t * s;

    hess_re(0, L + l) = hess_re(L + l, 0) = -ld * t * s;
    hess_im(0, L + l) = hess_im(L + l, 0) = ld * t * c;

    hess_re(l, l) = -r * c;
    hess_im(l, l) = -r * s;

    hess_re(l, L + l) = hess_re(L + l, l) = -s;
    hess_im(l, L + l) = hess_im(L + l, l) = c;
  }
}

namespace {

double nls_cost(const ComplexSignal& x, const HarmonicModelParams& p) {
  double cost = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t)
    cost += std::norm(harmonic_waveform(p, static_cast<double>(t)) - x[t]);
  return cost;
}

// Levenberg-damped Gauss-Newton on sum_t |mu_t(theta) - x_t|^2. Polishes the
// grid/golden solution so the stationarity residual reaches machine level;
// amplitudes are re-signed into [0, inf) with a pi phase flip if needed.
HarmonicModelParams gauss_newton_polish(const ComplexSignal& x,
                                        HarmonicModelParams p) {
  const std::size_t L = p.order();
  const std::size_t n = x.size();
  const Eigen::Index dim = static_cast<Eigen::Index>(2 * L + 1);
  Eigen::VectorXd g_re(dim), g_im(dim);
  Eigen::MatrixXd jtj(dim, dim);
  Eigen::VectorXd jtr(dim);
  double cost = nls_cost(x, p);
  double lambda = 0.0;

  for (int iter = 0; iter < 60; ++iter) {
    jtj.setZero();
    jtr.setZero();
    for (std::size_t t = 0; t < n; ++t) {
      const double td = static_cast<double>(t);
      const cplx eps = harmonic_waveform(p, td) - x[t];
      harmonic_waveform_gradient(p, td, g_re, g_im);
      jtj.noalias() += g_re * g_re.transpose() + g_im * g_im.transpose();
      jtr.noalias() += eps.real() * g_re + eps.imag() * g_im;
    }
    const double grad_norm = jtr.lpNorm<Eigen::Infinity>();
    const double scale = jtj.diagonal().maxCoeff();
    if (grad_norm <= 1e-15 * std::max(1.0, scale)) break;

    bool stepped = false;
    for (int attempt = 0; attempt < 12 && !stepped; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      if (lambda > 0.0) damped.diagonal().array() += lambda * scale;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
      if (ldlt.info() == Eigen::Success) {
        const Eigen::VectorXd step = ldlt.solve(-jtr);
        HarmonicModelParams trial = p;
        trial.omega0 += step(0);
        for (std::size_t l = 1; l <= L; ++l) {
          trial.phases[l - 1] += step(static_cast<Eigen::Index>(l));
          trial.amplitudes[l - 1] += step(static_cast<Eigen::Index>(L + l));
        }
        if (trial.omega0 > 0.0 &&
            static_cast<double>(L) * trial.omega0 < kPi) {
          const double trial_cost = nls_cost(x, trial);
          if (trial_cost <= cost) {
            const bool done = cost - trial_cost <= 1e-15 * (1.0 + cost);
            p = std::move(trial);
            cost = trial_cost;
            lambda = lambda > 0.0 ? lambda * 0.25 : 0.0;
            stepped = true;
            if (done) iter = 60;
            break;
          }
        }
      }
      lambda = lambda > 0.0 ? lambda * 10.0 : 1e-10;
    }
    if (!stepped) break;
  }

  for (std::size_t l = 0; l < L; ++l) {
    if (p.amplitudes[l] < 0.0) {
      p.amplitudes[l] = -p.amplitudes[l];
      p.phases[l] += kPi;
    }
    p.phases[l] = wrap_phase(p.phases[l]);
  }
  return p;
}

HarmonicModelParams params_at(const ComplexSignal& x, double omega0,
                              std::size_t order) {
  std::vector<double> freqs(order);
  for (std::size_t l = 1; l <= order; ++l)
    freqs[l - 1] = static_cast<double>(l) * omega0;
  const auto coeffs = ls_amp_phase(x, freqs);
  HarmonicModelParams p;
  p.omega0 = omega0;
  p.phases.resize(order);
  p.amplitudes.resize(order);
  for (std::size_t l = 0; l < order; ++l) {
    p.amplitudes[l] = std::abs(coeffs[l]);
    p.phases[l] = std::arg(coeffs[l]);
  }
  return p;
}

}  // namespace

PseudoTrueResult pseudo_true(const ComplexSignal& x, std::size_t order,
                             double sigma2, const SearchConfig& cfg) {
  if (!(sigma2 >= 0.0))
    throw std::invalid_argument("pseudo_true: sigma2 must be >= 0");
  const auto grid = detail::build_coarse_grid(x, order, cfg.omega_min,
                                              cfg.omega_max, cfg.grid_step);
  const double energy = detail::signal_energy(x);
  const std::size_t n = x.size();
  const int budget = cfg.max_iterations > 0 ? cfg.max_iterations : 200;

  std::vector<double> res(grid.g_max - grid.g_min + 1);
  for (std::size_t g = grid.g_min; g <= grid.g_max; ++g)
    res[g - grid.g_min] =
        detail::harmonic_residual(x, grid.omega(g), order, energy);

  std::size_t best_i = 0;
  for (std::size_t i = 1; i < res.size(); ++i)
    if (res[i] < res[best_i]) best_i = i;
  if (!std::isfinite(res[best_i]))
    throw std::runtime_error("pseudo_true: projection failed on whole grid");

  auto refine = [&](std::size_t i) {
    const double w = grid.omega(grid.g_min + i);
    return golden_minimize(
        [&](double v) { return detail::harmonic_residual(x, v, order, energy); },
        w - grid.step, w + grid.step, cfg.refine_tol, budget);
  };

  const auto best = refine(best_i);
  HarmonicModelParams theta = params_at(x, best.x, order);
  theta = gauss_newton_polish(x, theta);

  PseudoTrueResult out;
  out.theta0 = theta;
  out.residual.resize(n);
  double sse = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    out.residual[t] = harmonic_waveform(theta, static_cast<double>(t)) - x[t];
    sse += std::norm(out.residual[t]);
  }
  out.criterion = sse / static_cast<double>(n);
  out.sigma2_pseudo = sigma2 + out.criterion;

  // Flag near-ties: other local minima of the concentrated cost whose value
  // comes within 1% of the optimum (the long-signal ambiguity).
  const double best_cost = sse;
  for (std::size_t i = 1; i + 1 < res.size(); ++i) {
    if (i == best_i) continue;
    if (res[i] < res[i - 1] && res[i] <= res[i + 1]) {
      const auto local = refine(i);
      if (std::abs(local.x - best.x) <= 10.0 * grid.step) continue;
      if (local.value <= best_cost * 1.01)
        out.competing_minima.push_back(local.x);
    }
  }
  out.ambiguous = !out.competing_minima.empty();
  return out;
}

double crlb_harmonic_asymptotic(std::span<const double> amplitudes,
                                std::size_t n, double sigma2) {
  if (n < 2) throw std::invalid_argument("crlb_harmonic_asymptotic: n < 2");
  double s = 0.0;
  for (std::size_t k = 1; k <= amplitudes.size(); ++k)
    s += static_cast<double>(k * k) * amplitudes[k - 1] * amplitudes[k - 1];
  if (!(s > 0.0))
    throw std::invalid_argument("crlb_harmonic_asymptotic: zero amplitudes");
  const double nd = static_cast<double>(n);
  return 6.0 * sigma2 / (nd * (nd * nd - 1.0) * s);
}

UnstructuredCrlb crlb_unstructured(std::span<const double> amplitudes,
                                   std::size_t n, double sigma2) {
  if (n < 2) throw std::invalid_argument("crlb_unstructured: n < 2");
  const double nd = static_cast<double>(n);
  UnstructuredCrlb out;
  out.amp_var = sigma2 / (2.0 * nd);
  out.freq_var.resize(amplitudes.size());
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    const double r2 = amplitudes[k] * amplitudes[k];
    out.freq_var[k] = r2 > 0.0
                          ? 6.0 * sigma2 / (nd * (nd * nd - 1.0) * r2)
                          : std::numeric_limits<double>::infinity();
  }
  return out;
}

McrlbResult mcrlb_exact(const PseudoTrueResult& pt, const ComplexSignal& x,
                        double sigma2) {
  const HarmonicModelParams& p = pt.theta0;
  p.validate();
  const std::size_t L = p.order();
  const std::size_t n = x.size();
  const Eigen::Index dim = static_cast<Eigen::Index>(2 * L + 1);
  const double sb2 = pt.sigma2_pseudo;
  if (!(sb2 > 0.0))
    throw std::invalid_argument("mcrlb_exact: sigma2_pseudo must be > 0");

  Eigen::VectorXd g_re(dim), g_im(dim);
  Eigen::MatrixXd h_re(dim, dim), h_im(dim, dim);
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(dim, dim);      // sum grad grad^T
  Eigen::MatrixXd resid_hess = Eigen::MatrixXd::Zero(dim, dim);  // sum eps . hess
  for (std::size_t t = 0; t < n; ++t) {
    const double td = static_cast<double>(t);
    const cplx eps = harmonic_waveform(p, td) - x[t];
    harmonic_waveform_gradient(p, td, g_re, g_im);
    harmonic_waveform_hessian(p, td, h_re, h_im);
    info.noalias() += g_re * g_re.transpose() + g_im * g_im.transpose();
    resid_hess.noalias() += eps.real() * h_re + eps.imag() * h_im;
  }

  const Eigen::MatrixXd f = (2.0 * sigma2 / (sb2 * sb2)) * info;
  const Eigen::MatrixXd f_tilde = (2.0 / sb2) * resid_hess;
  const Eigen::MatrixXd a = -(sb2 / sigma2) * f - f_tilde;

  McrlbResult out;
  const Eigen::MatrixXd a_inv = invert_symmetric(a, &out.rcond, "mcrlb_exact");
  const Eigen::MatrixXd bound = a_inv * f * a_inv;
  out.omega0_bound = bound(0, 0);
  out.diagonal.assign(bound.diagonal().data(),
                      bound.diagonal().data() + dim);
  return out;
}

double mcrlb_asymptotic(const HarmonicModelParams& theta0,
                        const SinusoidSet& true_params, double sigma2,
                        std::size_t n) {
  const std::size_t K = true_params.size();
  if (theta0.order() != K)
    throw std::invalid_argument("mcrlb_asymptotic: order mismatch");
  const double nd = static_cast<double>(n);
  const auto& comps = true_params.components();

  double c = 0.0, z = 0.0, d = 0.0, e = 0.0;
  double sum_k2_amp2 = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    const double amp = theta0.amplitudes[k - 1];      // pseudo-true
    const double amp_true = comps[k - 1].amplitude;   // actual
    const double phi_breve = theta0.phases[k - 1] - comps[k - 1].phase;
    const double w_breve = kd * theta0.omega0 - comps[k - 1].frequency;
    sum_k2_amp2 += kd * kd * amp * amp;

    double t_cos = 0.0, t_sin = 0.0, t2_cos = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double td = static_cast<double>(t);
      const double arg = phi_breve + w_breve * td;
      const double cv = std::cos(arg);
      t_cos += td * cv;
      t_sin += td * std::sin(arg);
      t2_cos += td * td * cv;
    }

    z += 2.0 * kd * kd * amp * amp_true * t2_cos;
    d += -2.0 * (nd - 1.0) * kd * kd * amp * amp_true * t_cos;
    e += (2.0 / nd) * kd * kd * amp_true * amp_true * t_sin * t_sin;
    const double centered = amp_true * t_cos - amp * sum_t(n);
    e += (2.0 / nd) * kd * kd * centered * centered;
  }
  c = nd * (nd * nd - 1.0) * sum_k2_amp2 / 6.0;
  z += -2.0 * sum_k2_amp2 * sum_t2(n);
  d += 2.0 * (nd - 1.0) * (nd * (nd - 1.0) / 2.0) * sum_k2_amp2;

  const double denom = c - e + z + d;
  return sigma2 * (c + e) / (denom * denom);
}

ChsVarResult chs_asymptotic_var(const SinusoidSet& true_params, std::size_t n,
                                double sigma2) {
  const std::size_t K = true_params.size();
  if (K == 0) throw std::invalid_argument("chs_asymptotic_var: empty model");
  const double nd = static_cast<double>(n);
  const auto amps = true_params.amplitudes();
  const auto freqs = true_params.frequencies();

  double sum_k2r2 = 0.0;
  double sum_k = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    sum_k2r2 += static_cast<double>(k * k) * amps[k - 1] * amps[k - 1];
    sum_k += static_cast<double>(k) * freqs[k - 1];
  }
  double sum_k2 = 0.0;
  for (std::size_t k = 1; k <= K; ++k) sum_k2 += static_cast<double>(k * k);

  ChsVarResult out;
  out.value = 6.0 * sigma2 / (nd * (nd * nd - 1.0) * sum_k2r2);

  double second = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    double inner = 0.0;
    for (std::size_t l = 1; l <= K; ++l) {
      inner += static_cast<double>(l) * amps[l - 1] * amps[l - 1] *
               (static_cast<double>(l) * freqs[k - 1] -
                static_cast<double>(k) * freqs[l - 1]);
    }
    second += static_cast<double>(k * k) * amps[k - 1] * amps[k - 1] * inner *
              inner;
  }
  out.value += 2.0 * sigma2 /
               (nd * sum_k2r2 * sum_k2r2 * sum_k2r2 * sum_k2r2) * second;

  // smallness premise: deviations from the least-squares harmonic stack stay
  // below omega0 / (2K+3)
  const double w0_fit = sum_k / sum_k2;
  double max_dev = 0.0;
  for (std::size_t k = 1; k <= K; ++k)
    max_dev = std::max(
        max_dev, std::abs(freqs[k - 1] - static_cast<double>(k) * w0_fit));
  out.premise_ok =
      w0_fit > 0.0 && max_dev < w0_fit / (2.0 * static_cast<double>(K) + 3.0);
  return out;
}

HybridFisher hybrid_fisher(const StochasticPitchModel& model, std::size_t n) {
  model.validate();
  const std::size_t K = model.harmonic_count();
  const Eigen::Index dim = static_cast<Eigen::Index>(3 * K + 1);
  const auto& r = model.amplitudes;
  const auto& phi = model.phases;
  const double w0 = model.omega0;

  HybridFisher out;
  out.sigma2_delta = model.sigma2_delta;
  out.delta_deterministic = model.sigma2_delta == 0.0;
  out.harmonic_count = K;
  out.matrix = Eigen::MatrixXd::Zero(dim, dim);

  Eigen::MatrixXd lambda(dim, dim);
  const auto iw = [&] { return Eigen::Index(0); };
  const auto ip = [&](std::size_t k) { return static_cast<Eigen::Index>(k); };
  const auto ir = [&](std::size_t k) { return static_cast<Eigen::Index>(K + k); };
  const auto id = [&](std::size_t k) {
    return static_cast<Eigen::Index>(2 * K + k);
  };

  for (std::size_t t = 0; t < n; ++t) {
    const double td = static_cast<double>(t);
    const double damp = std::exp(-model.sigma2_delta * td * td);
    lambda.setZero();

    // deterministic-block entries
    double ww = 0.0;
    for (std::size_t k = 1; k <= K; ++k)
      ww += static_cast<double>(k * k) * r[k - 1] * r[k - 1];
    ww *= td * td;
    for (std::size_t k = 1; k <= K; ++k) {
      for (std::size_t l = 1; l <= K; ++l) {
        if (l == k) continue;
        const double arg = w0 * (static_cast<double>(k) - static_cast<double>(l)) * td +
                           phi[k - 1] - phi[l - 1];
        ww += td * td * damp * static_cast<double>(k) *
              static_cast<double>(l) * r[k - 1] * r[l - 1] * std::cos(arg);
      }
    }
    lambda(iw(), iw()) = ww;

    for (std::size_t k = 1; k <= K; ++k) {
      double wr = 0.0;
      double wp = td * static_cast<double>(k) * r[k - 1] * r[k - 1];
      for (std::size_t l = 1; l <= K; ++l) {
        if (l == k) continue;
        const double arg = w0 * (static_cast<double>(k) - static_cast<double>(l)) * td +
                           phi[k - 1] - phi[l - 1];
        wr += td * damp * static_cast<double>(l) * r[l - 1] * std::sin(arg);
        wp += td * damp * static_cast<double>(l) * r[k - 1] * r[l - 1] *
              std::cos(arg);
      }
      lambda(iw(), ir(k)) = lambda(ir(k), iw()) = wr;
      lambda(iw(), ip(k)) = lambda(ip(k), iw()) = wp;
    }

    for (std::size_t k = 1; k <= K; ++k) {
      for (std::size_t l = 1; l <= K; ++l) {
        if (l == k) {
          lambda(ir(k), ir(k)) = 1.0;
          lambda(ip(k), ip(k)) = r[k - 1] * r[k - 1];
          // r-phi diagonal entry is zero
          continue;
        }
        const double arg = w0 * (static_cast<double>(k) - static_cast<double>(l)) * td +
                           phi[k - 1] - phi[l - 1];
        lambda(ir(k), ir(l)) = damp * std::cos(arg);
        lambda(ir(k), ip(l)) = damp * std::sin(arg);
        lambda(ip(l), ir(k)) = lambda(ir(k), ip(l));
        lambda(ip(k), ip(l)) = damp * r[k - 1] * r[l - 1] * std::cos(arg);
      }
    }

    // delta rows/columns are t- and t^2-lifts of the phase rows/columns
    for (std::size_t k = 1; k <= K; ++k) {
      lambda(iw(), id(k)) = lambda(id(k), iw()) = td * lambda(iw(), ip(k));
      for (std::size_t l = 1; l <= K; ++l) {
        lambda(ir(l), id(k)) = lambda(id(k), ir(l)) = td * lambda(ir(l), ip(k));
        lambda(ip(l), id(k)) = lambda(id(k), ip(l)) = td * lambda(ip(l), ip(k));
        lambda(id(l), id(k)) = td * td * lambda(ip(l), ip(k));
      }
    }

    out.matrix.noalias() += lambda;
  }
  out.matrix *= 2.0 / model.sigma2_noise;

  if (!out.delta_deterministic) {
    for (std::size_t k = 1; k <= K; ++k)
      out.matrix(id(k), id(k)) += 1.0 / model.sigma2_delta;
  }
  return out;
}

HcrlbResult hcrlb(const StochasticPitchModel& model, std::size_t n) {
  if (!(model.sigma2_delta > 0.0))
    throw std::invalid_argument("hcrlb: sigma2_delta must be > 0");
  const HybridFisher f = hybrid_fisher(model, n);
  HcrlbResult out;
  const Eigen::MatrixXd inv = invert_symmetric(f.matrix, &out.rcond, "hcrlb");
  const std::size_t K = model.harmonic_count();
  const Eigen::Index w = 0;
  const Eigen::Index d1 = static_cast<Eigen::Index>(2 * K + 1);
  out.omega0_bound = inv(w, w);
  out.omega1_bound = inv(w, w) + inv(d1, d1) + 2.0 * inv(w, d1);
  out.diagonal.assign(inv.diagonal().data(),
                      inv.diagonal().data() + inv.rows());
  return out;
}

double mse_misspecified(double bound, double pseudo_value, double reference) {
  const double bias = pseudo_value - reference;
  return bound + bias * bias;
}

Eigen::MatrixXd harmonic_fim(const HarmonicModelParams& params, double sigma2,
                             std::size_t n) {
  params.validate();
  if (!(sigma2 > 0.0))
    throw std::invalid_argument("harmonic_fim: sigma2 must be > 0");
  const Eigen::Index dim = static_cast<Eigen::Index>(2 * params.order() + 1);
  Eigen::VectorXd g_re(dim), g_im(dim);
  Eigen::MatrixXd fim = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t t = 0; t < n; ++t) {
    harmonic_waveform_gradient(params, static_cast<double>(t), g_re, g_im);
    fim.noalias() += g_re * g_re.transpose() + g_im * g_im.transpose();
  }
  return (2.0 / sigma2) * fim;
}

}  // namespace pitch
