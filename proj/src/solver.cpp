#include "bulkface/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bulkface/errors.hpp"
#include "bulkface/kernels.hpp"

namespace bulkface {

PcgResult pcg(int n, const std::function<void(const double*, double*)>& apply,
              std::span<const double> inv_diag, std::span<const double> b,
              std::span<double> x, double rel_tol, int max_iterations) {
  PcgResult res;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  const double target = rel_tol * bnorm;
  std::vector<double> r(n), z(n), p(n), q(n);

  auto true_residual = [&]() {
    apply(x.data(), q.data());
    for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];
    return norm2(r);
  };
  auto reset_direction = [&]() {
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    return dot(r, z);
  };

  double rnorm = true_residual();
  double rz = reset_direction();
  int restarts = 0;

  for (int it = 0; it < max_iterations; ++it) {
    if (rnorm <= target) {
      // recursive residual can drift; confirm against the true one
      const double tn = true_residual();
      res.iterations = it;
      res.relative_residual = tn / bnorm;
      if (tn <= target || restarts >= 2) {
        // past two restarts treat a small overshoot as stagnation at the
        // attainable floor rather than a failure
        res.converged = tn <= 8.0 * target;
        return res;
      }
      ++restarts;
      rz = reset_direction();
      rnorm = tn;  // > target here, so the iteration continues
    }
    apply(p.data(), q.data());
    const double pq = dot(p, q);
    if (!(pq > 0.0) || !std::isfinite(pq))
      throw LinearSolveFailed("pcg: operator is not positive definite on the search space");
    const double alpha = rz / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    xpby(z, rz_new / rz, p);
    rz = rz_new;
    rnorm = norm2(r);
  }
  res.iterations = max_iterations;
  res.relative_residual = true_residual() / bnorm;
  res.converged = res.relative_residual * bnorm <= target;
  return res;
}

PcgResult pcg(const SparseOperator& A, std::span<const double> b, std::span<double> x,
              double rel_tol, int max_iterations) {
  std::vector<double> inv_diag = A.diagonal_values();
  for (double& d : inv_diag) d = (d > 0.0) ? 1.0 / d : 1.0;
  auto apply = [&A](const double* in, double* out) {
    A.apply(std::span<const double>(in, static_cast<std::size_t>(A.size())),
            std::span<double>(out, static_cast<std::size_t>(A.size())));
  };
  return pcg(A.size(), apply, inv_diag, b, x, rel_tol, max_iterations);
}

EigenResult smallest_nonzero_eigenvalue(const SparseOperator& A,
                                        std::span<const double> mass_diag, double tol,
                                        int max_iterations) {
  const int n = A.size();
  std::vector<double> d(n), inv_d(n);
  for (int i = 0; i < n; ++i) {
    if (!(mass_diag[i] > 0.0)) throw Error("eigensolve: mass diagonal must be positive");
    d[i] = std::sqrt(mass_diag[i]);
    inv_d[i] = 1.0 / d[i];
  }

  // Symmetrized operator B = M^{-1/2} A M^{-1/2}; its kernel is the scaled
  // constant direction z0 = M^{1/2} 1 / |.|.
  std::vector<double> scratch(n), vin(n);
  auto apply_B = [&](const double* in, double* out) {
    for (int i = 0; i < n; ++i) scratch[i] = inv_d[i] * in[i];
    A.apply(scratch, std::span<double>(out, static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) out[i] *= inv_d[i];
  };

  std::vector<double> z0 = d;
  {
    const double nz = norm2(z0);
    for (double& v : z0) v /= nz;
  }
  auto deflate = [&](std::span<double> v) {
    const double c = dot(v, z0);
    axpy(-c, z0, v);
  };
  // deflate after every multiply, so roundoff never reintroduces the kernel
  auto apply_PBP = [&](const double* in, double* out) {
    std::copy(in, in + n, vin.begin());
    deflate(vin);
    apply_B(vin.data(), out);
    deflate(std::span<double>(out, static_cast<std::size_t>(n)));
  };

  std::vector<double> inv_diag_B(n);
  {
    std::vector<double> diag_A = A.diagonal_values();
    for (int i = 0; i < n; ++i) {
      const double db = diag_A[i] * inv_d[i] * inv_d[i];
      inv_diag_B[i] = db > 0.0 ? 1.0 / db : 1.0;
    }
  }

  std::mt19937_64 rng(9001);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> z(n);
  for (double& v : z) v = unif(rng);
  deflate(z);
  {
    const double nz = norm2(z);
    if (nz == 0.0) throw Error("eigensolve: degenerate start vector");
    for (double& v : z) v /= nz;
  }

  std::vector<double> y(n, 0.0), Bz(n);
  EigenResult res;
  for (int it = 1; it <= max_iterations; ++it) {
    PcgResult lin = pcg(n, apply_PBP, inv_diag_B, z, std::span<double>(y), 1e-12, 40 * n);
    if (!lin.converged)
      throw LinearSolveFailed("eigensolve: inner solve failed to converge");
    deflate(y);
    const double ny = norm2(y);
    if (!(ny > 0.0)) throw EigenNotConverged("eigensolve: iterate collapsed");
    for (int i = 0; i < n; ++i) z[i] = y[i] / ny;
    apply_B(z.data(), Bz.data());
    const double lambda = dot(z, Bz);
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = Bz[i] - lambda * z[i];
      resid += e * e;
    }
    resid = std::sqrt(resid);
    res.lambda = lambda;
    res.residual = resid;
    res.iterations = it;
    if (resid <= tol) {
      res.eigenvector.resize(n);
      for (int i = 0; i < n; ++i) res.eigenvector[i] = z[i] * inv_d[i];
      return res;
    }
  }
  throw EigenNotConverged("eigensolve: inverse iteration did not reach tolerance");
}

}  // namespace bulkface
