#pragma once

#include <cstddef>
#include <span>

namespace bulkface {

// Number of threads used by the parallel kernels. Read once from
// BULKFACE_THREADS (default 1, which keeps runs bit-reproducible out of the
// box); can be overridden programmatically, e.g. by the benchmark driver.
int thread_count();
void set_thread_count(int n);

// Plain single-threaded reference kernels. These are the baseline the
// production kernels are tested against and benchmarked.
namespace serial {

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void spmv(int n, const int* row_ptr, const int* cols, const double* vals,
          const double* x, double* y);

}  // namespace serial

// Production kernels. Reductions always use a fixed block decomposition
// (independent of the thread count), so the result is bit-identical whether
// run on 1 or N threads.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);

void spmv(int n, const int* row_ptr, const int* cols, const double* vals,
          const double* x, double* y);

}  // namespace bulkface
