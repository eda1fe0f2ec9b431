#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bulkface/sparse.hpp"

namespace bulkface {

struct PcgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Conjugate gradients with diagonal (Jacobi) preconditioning for symmetric
// positive (semi)definite systems. x carries the initial guess on entry and
// the solution on exit; convergence is |b - A x|_2 <= rel_tol * |b|_2,
// confirmed against the explicitly recomputed residual.
PcgResult pcg(int n, const std::function<void(const double*, double*)>& apply,
              std::span<const double> inv_diag, std::span<const double> b,
              std::span<double> x, double rel_tol, int max_iterations);

PcgResult pcg(const SparseOperator& A, std::span<const double> b, std::span<double> x,
              double rel_tol, int max_iterations);

struct EigenResult {
  double lambda = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> eigenvector;  // in the original variables
};

// Smallest nonzero eigenvalue of A x = lambda M x for symmetric PSD A whose
// kernel is the constant vector, with diagonal mass M. Shift-free inverse
// iteration in the symmetrized variables with the kernel direction deflated
// after every operator application. Throws EigenNotConverged past the
// iteration cap.
EigenResult smallest_nonzero_eigenvalue(const SparseOperator& A,
                                        std::span<const double> mass_diag, double tol,
                                        int max_iterations);

}  // namespace bulkface
