#pragma once

// Independent dense reference implementation used only by the tests: local
// matrices are hand-coded from the edge-vector formulas and summed directly
// into dense storage, systems are solved by LU with partial pivoting, and
// eigenvalues come from cyclic Jacobi sweeps. Nothing here shares code with
// the sparse assembly or the iterative solvers it checks.

#include <vector>

#include "bulkface/coefficients.hpp"
#include "bulkface/geometry.hpp"
#include "bulkface/sparse.hpp"
#include "bulkface/state.hpp"

namespace bulkface::testing {

struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i) * cols + j];
  }
};

DenseMatrix dense_from(const SparseOperator& A);

// LU with partial pivoting.
std::vector<double> lu_solve(DenseMatrix A, std::vector<double> b);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> jacobi_eigenvalues(DenseMatrix S);

// Dense operator assembled by direct summation of hand-coded local matrices.
DenseMatrix oracle_operator(const CoupledGeometry& geom, const CoefficientModel& model,
                            const StateVector& w);

std::vector<double> oracle_mass_diag(const CoupledGeometry& geom);

// One implicit Euler step for a constant-coefficient model (single linear
// solve), via the dense oracle operator and LU.
std::vector<double> oracle_implicit_step(const CoupledGeometry& geom,
                                         const CoefficientModel& model,
                                         const std::vector<double>& u_n, double dt);

// Smallest nonzero generalized eigenvalue of the unit-coefficient operator
// against the lumped mass, via the dense route.
double oracle_lambda1(const CoupledGeometry& geom);

}  // namespace bulkface::testing
