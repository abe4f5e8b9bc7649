#include "dft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace nlselab::detail {

namespace {

// Plan cache keyed by (n, direction). Plans are created once with
// FFTW_ESTIMATE on fftw_malloc'ed scratch and re-executed on per-call
// buffers of identical alignment; the planner itself is not thread-safe,
// hence the mutex.
class PlanCache {
public:
  fftw_plan get(int n, bool forward) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, forward);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_complex* scratch = fftw_alloc_complex(static_cast<size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, scratch, scratch,
                                      forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE);
    fftw_free(scratch);
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::pair<int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in,
                                      bool forward) {
  const int n = static_cast<int>(in.size());
  fftw_plan plan = cache().get(n, forward);

  fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(n));
  // std::complex<double> is layout-compatible with double[2].
  std::memcpy(buf, reinterpret_cast<const double*>(in.data()),
              sizeof(fftw_complex) * static_cast<size_t>(n));
  fftw_execute_dft(plan, buf, buf);

  std::vector<std::complex<double>> out(static_cast<size_t>(n));
  std::memcpy(reinterpret_cast<double*>(out.data()), buf,
              sizeof(fftw_complex) * static_cast<size_t>(n));
  fftw_free(buf);
  return out;
}

std::vector<double> fft_wavenumbers(int n, double length) {
  std::vector<double> k(static_cast<size_t>(n));
  const double dk = 2.0 * M_PI / length;
  for (int q = 0; q < n; ++q) {
    const int shifted = (2 * q < n) ? q : q - n;
    k[static_cast<size_t>(q)] = dk * shifted;
  }
  if (n % 2 == 0) k[static_cast<size_t>(n / 2)] = dk * (n / 2);
  return k;
}

}  // namespace nlselab::detail
