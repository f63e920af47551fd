#include "pitch/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pitch {

namespace {

std::mutex g_plan_mutex;
std::map<std::size_t, fftw_plan>& plan_cache() {
  static std::map<std::size_t, fftw_plan> cache;
  return cache;
}

// Plans are cached per length and created with FFTW_ESTIMATE so the chosen
// algorithm (and therefore the rounding) is a pure function of the length.
fftw_plan plan_for(std::size_t n, fftw_complex* in, fftw_complex* out) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD,
                                 FFTW_ESTIMATE);
  cache.emplace(n, p);
  return p;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

std::vector<cplx> dft_forward(std::span<const cplx> x, std::size_t n) {
  if (n == 0 || n < x.size())
    throw std::invalid_argument("dft_forward: length must be >= input size");
  FftwBuffer in(n);
  FftwBuffer out(n);
  std::memset(in.data, 0, sizeof(fftw_complex) * n);
  std::memcpy(in.data, x.data(), sizeof(fftw_complex) * x.size());
  fftw_plan plan = plan_for(n, in.data, out.data);
  fftw_execute_dft(plan, in.data, out.data);
  std::vector<cplx> result(n);
  std::memcpy(result.data(), out.data, sizeof(fftw_complex) * n);
  return result;
}

}  // namespace pitch
