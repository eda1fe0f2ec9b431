#include "bulkface/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace bulkface {

namespace {

int initial_thread_count() {
  const char* env = std::getenv("BULKFACE_THREADS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

int& thread_count_ref() {
  static int n = initial_thread_count();
  return n;
}

// Fixed reduction block; summation order never depends on the thread count.
constexpr std::size_t kBlock = 4096;

}  // namespace

int thread_count() { return thread_count_ref(); }

void set_thread_count(int n) { thread_count_ref() = n > 0 ? n : 1; }

namespace serial {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void spmv(int n, const int* row_ptr, const int* cols, const double* vals,
          const double* x, double* y) {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

}  // namespace serial

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n <= kBlock) return serial::dot(a, b);
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
  const int nt = thread_count();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
  for (long bi = 0; bi < static_cast<long>(nblocks); ++bi) {
    const std::size_t lo = static_cast<std::size_t>(bi) * kBlock;
    const std::size_t hi = std::min(lo + kBlock, n);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    partial[static_cast<std::size_t>(bi)] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const long n = static_cast<long>(x.size());
  const int nt = thread_count();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && n > 8192)
  for (long i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  const long n = static_cast<long>(x.size());
  const int nt = thread_count();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && n > 8192)
  for (long i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void spmv(int n, const int* row_ptr, const int* cols, const double* vals,
          const double* x, double* y) {
  // Each row is accumulated serially by a single thread, so the values do not
  // depend on the schedule or the thread count.
  const int nt = thread_count();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && n > 2048)
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

}  // namespace bulkface
