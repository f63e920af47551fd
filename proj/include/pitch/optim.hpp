#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pitch {

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section minimization on [lo, hi]. Returns the best point evaluated,
/// so the reported value never exceeds any intermediate evaluation. The
/// optional callback sees the running best value once per iteration.
GoldenResult golden_minimize(const std::function<double(double)>& f, double lo,
                             double hi, double tol, int max_iter,
                             const std::function<void(double)>& on_best = {});

struct SimplexOptions {
  double initial_step = 1e-3;
  double tol = 1e-10;   // simplex diameter, same units as x
  int max_iter = 0;     // 0: 800 * dimension
  int restarts = 1;     // fresh simplex around the best point
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead derivative-free minimization. The best vertex value is
/// non-increasing over iterations; the callback observes it once per
/// iteration.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x0, const SimplexOptions& opt,
                          const std::function<void(double)>& on_best = {});

}  // namespace pitch
