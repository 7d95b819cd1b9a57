#include "cmcfol/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

namespace cmcfol {

PowerFit fit_power_law(const std::vector<double>& radii,
                       const std::vector<double>& values,
                       double zero_floor) {
  if (radii.size() != values.size() || radii.size() < 2)
    throw InsufficientRadii("fit_power_law needs >= 2 samples");
  PowerFit out;
  bool all_zero = true;
  for (double v : values)
    if (std::abs(v) > zero_floor) all_zero = false;
  if (all_zero) {
    out.identically_zero = true;
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(radii.size());
  for (int i = 0; i < n; ++i) {
    const double x = std::log(radii[i]);
    const double y = std::log(std::max(std::abs(values[i]), zero_floor));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  out.slope = (n * sxy - sx * sy) / det;
  out.intercept = (sy * sxx - sx * sxy) / det;
  double ss = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(radii[i]);
    const double y = std::log(std::max(std::abs(values[i]), zero_floor));
    const double r = y - (out.intercept + out.slope * x);
    ss += r * r;
  }
  out.rms_residual = std::sqrt(ss / n);
  return out;
}

SeriesFit extrapolate_series(const std::vector<double>& radii,
                             const std::vector<double>& values,
                             double s0, int nterms) {
  const int n = static_cast<int>(radii.size());
  if (n < 3 || values.size() != radii.size())
    throw InsufficientRadii("extrapolate_series needs >= 3 samples");
  nterms = std::min(nterms, n - 1);
  Eigen::MatrixXd A(n, nterms + 1);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    for (int k = 0; k < nterms; ++k) A(i, k + 1) = std::pow(radii[i], -(s0 + k));
    b(i) = values[i];
  }
  Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
  SeriesFit out;
  out.limit = sol(0);
  out.coeffs.assign(sol.data() + 1, sol.data() + 1 + nterms);
  out.rms_residual = std::sqrt((A * sol - b).squaredNorm() / n);
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("CMCFOL_THREADS")) {
    const int k = std::atoi(env);
    if (k >= 0) return std::max(1, k);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      constexpr std::size_t chunk = 16;
      try {
        for (;;) {
          if (failed.load(std::memory_order_relaxed)) return;
          const std::size_t begin = next.fetch_add(chunk);
          if (begin >= n) return;
          const std::size_t end = std::min(begin + chunk, n);
          for (std::size_t i = begin; i < end; ++i) body(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cmcfol
