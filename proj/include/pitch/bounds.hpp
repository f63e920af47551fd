#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "pitch/estimators.hpp"
#include "pitch/types.hpp"

namespace pitch {

/// Best harmonic fit of a noiseless waveform and the implied noise-variance
/// inflation: sigma2_pseudo = sigma2 + (1/N) sum_t |eps_t|^2.
struct PseudoTrueResult {
  HarmonicModelParams theta0;
  double sigma2_pseudo = 0.0;
  std::vector<cplx> residual;  // eps_t = mu_t(theta0) - x_t
  double criterion = 0.0;      // (1/N) sum_t |eps_t|^2
  bool ambiguous = false;      // second local minimum within 1% of the optimum
  std::vector<double> competing_minima;
};

/// theta0 = argmin (1/N) sum_t |x_t - mu_t(theta)|^2 over harmonic models of
/// the given order. Gradient-polished so the stationarity condition holds to
/// near machine precision. x is the noiseless model signal; sigma2 is the
/// measurement-noise variance used for sigma2_pseudo.
PseudoTrueResult pseudo_true(const ComplexSignal& x, std::size_t order,
                             double sigma2, const SearchConfig& cfg = {});

/// Asymptotic pitch CRLB of a perfectly harmonic model:
/// 6*sigma2 / (N (N^2-1) sum_k k^2 r_k^2).
double crlb_harmonic_asymptotic(std::span<const double> amplitudes,
                                std::size_t n, double sigma2);

struct UnstructuredCrlb {
  std::vector<double> freq_var;  // 6*sigma2 / (N (N^2-1) r_k^2) per component
  double amp_var = 0.0;          // sigma2 / (2N)
};

/// Asymptotic per-component bounds for K unrelated sinusoids.
UnstructuredCrlb crlb_unstructured(std::span<const double> amplitudes,
                                   std::size_t n, double sigma2);

struct McrlbResult {
  double omega0_bound = 0.0;
  std::vector<double> diagonal;  // full diagonal of A^-1 F A^-1
  double rcond = 0.0;            // of A
};

/// Exact misspecified CRLB at the pseudo-true parameter: diag(A^-1 F A^-1)
/// with F the misspecified-information and A the expected-Hessian matrices,
/// assembled from analytic waveform derivatives.
McrlbResult mcrlb_exact(const PseudoTrueResult& pt, const ComplexSignal& x,
                        double sigma2);

/// Large-N closed form sigma2 (C+E)/(C-E+Z+D)^2 for the pseudo-true
/// fundamental. theta0 must have the same order as true_params.
double mcrlb_asymptotic(const HarmonicModelParams& theta0,
                        const SinusoidSet& true_params, double sigma2,
                        std::size_t n);

struct ChsVarResult {
  double value = 0.0;
  bool premise_ok = true;  // perturbation-smallness premise of the formula
};

/// Asymptotic variance of the plug-in transport-pitch estimate.
ChsVarResult chs_asymptotic_var(const SinusoidSet& true_params, std::size_t n,
                                double sigma2);

/// Fisher information for the hybrid model over (omega0, phi_1..K, r_1..K,
/// delta_1..K). For sigma2_delta > 0 this is the expected information plus
/// the 1/sigma2_delta prior block; for sigma2_delta = 0 the matrix is the
/// deterministic harmonic-model limit and the delta block is flagged.
struct HybridFisher {
  Eigen::MatrixXd matrix;  // (3K+1) x (3K+1)
  double sigma2_delta = 0.0;
  bool delta_deterministic = false;
  std::size_t harmonic_count = 0;

  std::size_t omega0_index() const { return 0; }
  std::size_t phase_index(std::size_t k) const { return k; }          // k = 1..K
  std::size_t amp_index(std::size_t k) const { return harmonic_count + k; }
  std::size_t delta_index(std::size_t k) const { return 2 * harmonic_count + k; }

  /// Deterministic-parameter block (omega0, phases, amplitudes).
  Eigen::MatrixXd theta_block() const {
    const auto m = 2 * harmonic_count + 1;
    return matrix.topLeftCorner(m, m);
  }
};

HybridFisher hybrid_fisher(const StochasticPitchModel& model, std::size_t n);

struct HcrlbResult {
  double omega0_bound = 0.0;
  double omega1_bound = 0.0;  // for the first component frequency omega0+delta_1
  std::vector<double> diagonal;
  double rcond = 0.0;
};

/// Diagonal of the inverse hybrid information matrix; requires
/// sigma2_delta > 0. Throws ConditioningError when the matrix is singular.
HcrlbResult hcrlb(const StochasticPitchModel& model, std::size_t n);

/// Theoretical MSE of a misspecified estimate: bound + (pseudo - reference)^2.
double mse_misspecified(double bound, double pseudo_value, double reference);

/// Exact finite-N Fisher information of the harmonic model over
/// (omega0, phi_1..L, r_1..L): (2/sigma2) sum_t grad mu grad mu^T.
Eigen::MatrixXd harmonic_fim(const HarmonicModelParams& params, double sigma2,
                             std::size_t n);

/// Harmonic waveform value and analytic derivatives, exposed for testing
/// against finite differences. Parameter order: (omega0, phi_1..L, r_1..L).
cplx harmonic_waveform(const HarmonicModelParams& params, double t);
void harmonic_waveform_gradient(const HarmonicModelParams& params, double t,
                                Eigen::VectorXd& grad_re,
                                Eigen::VectorXd& grad_im);
void harmonic_waveform_hessian(const HarmonicModelParams& params, double t,
                               Eigen::MatrixXd& hess_re,
                               Eigen::MatrixXd& hess_im);

}  // namespace pitch
