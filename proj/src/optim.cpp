#include "pitch/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pitch {

GoldenResult golden_minimize(const std::function<double(double)>& f, double lo,
                             double hi, double tol, int max_iter,
                             const std::function<void(double)>& on_best) {
  constexpr double invphi = 0.61803398874989484820;
  if (hi < lo) std::swap(lo, hi);

  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);

  double best_x = fc <= fd ? c : d;
  double best_f = std::min(fc, fd);
  if (on_best) on_best(best_f);

  int it = 0;
  while (b - a > tol && it < max_iter) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    const double x = fc <= fd ? c : d;
    const double v = std::min(fc, fd);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
    if (on_best) on_best(best_f);
    ++it;
  }
  return {best_x, best_f, it};
}

namespace {

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> fx;
};

double diameter(const Simplex& s) {
  double d = 0.0;
  for (std::size_t i = 1; i < s.x.size(); ++i)
    for (std::size_t j = 0; j < s.x[i].size(); ++j)
      d = std::max(d, std::abs(s.x[i][j] - s.x[0][j]));
  return d;
}

void sort_simplex(Simplex& s) {
  std::vector<std::size_t> idx(s.x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return s.fx[a] < s.fx[b]; });
  Simplex out;
  out.x.reserve(s.x.size());
  out.fx.reserve(s.x.size());
  for (std::size_t i : idx) {
    out.x.push_back(std::move(s.x[i]));
    out.fx.push_back(s.fx[i]);
  }
  s = std::move(out);
}

SimplexResult run_simplex(const std::function<double(std::span<const double>)>& f,
                          const std::vector<double>& start, double step,
                          double tol, int max_iter,
                          const std::function<void(double)>& on_best) {
  const std::size_t n = start.size();
  Simplex s;
  s.x.assign(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) s.x[i + 1][i] += step;
  s.fx.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s.fx[i] = f(s.x[i]);
  sort_simplex(s);
  if (on_best) on_best(s.fx[0]);

  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  int it = 0;
  bool converged = false;
  while (it < max_iter) {
    if (diameter(s) < tol) {
      converged = true;
      break;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += s.x[i][j];
      centroid[j] = sum / static_cast<double>(n);
    }
    const auto& worst = s.x[n];
    for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - worst[j]);
    const double fr = f(xr);

    if (fr < s.fx[0]) {
      for (std::size_t j = 0; j < n; ++j)
        xe[j] = centroid[j] + 2.0 * (centroid[j] - worst[j]);
      const double fe = f(xe);
      if (fe < fr) {
        s.x[n] = xe;
        s.fx[n] = fe;
      } else {
        s.x[n] = xr;
        s.fx[n] = fr;
      }
    } else if (fr < s.fx[n - 1]) {
      s.x[n] = xr;
      s.fx[n] = fr;
    } else {
      const bool outside = fr < s.fx[n];
      const auto& ref = outside ? xr : worst;
      for (std::size_t j = 0; j < n; ++j)
        xc[j] = centroid[j] + 0.5 * (ref[j] - centroid[j]);
      const double fcv = f(xc);
      if (fcv < (outside ? fr : s.fx[n])) {
        s.x[n] = xc;
        s.fx[n] = fcv;
      } else {
        // shrink toward the best vertex
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            s.x[i][j] = s.x[0][j] + 0.5 * (s.x[i][j] - s.x[0][j]);
          s.fx[i] = f(s.x[i]);
        }
      }
    }
    sort_simplex(s);
    if (on_best) on_best(s.fx[0]);
    ++it;
  }

  SimplexResult r;
  r.x = s.x[0];
  r.value = s.fx[0];
  r.iterations = it;
  r.converged = converged;
  return r;
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x0, const SimplexOptions& opt,
                          const std::function<void(double)>& on_best) {
  const int max_iter =
      opt.max_iter > 0 ? opt.max_iter : 800 * static_cast<int>(x0.size());
  std::vector<double> start(x0.begin(), x0.end());
  SimplexResult best =
      run_simplex(f, start, opt.initial_step, opt.tol, max_iter, on_best);
  double step = opt.initial_step;
  for (int r = 0; r < opt.restarts; ++r) {
    // The restart seeds a fresh simplex at the incumbent, so the best vertex
    // can only improve; convergence is judged by the final run.
    step = std::max(std::sqrt(step * opt.tol), 16.0 * opt.tol);
    SimplexResult next =
        run_simplex(f, best.x, step, opt.tol, max_iter, on_best);
    next.iterations += best.iterations;
    best = std::move(next);
  }
  return best;
}

}  // namespace pitch
