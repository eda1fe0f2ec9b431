#include <doctest.h>

#include <cmath>
#include <random>

#include "bulkface/analysis.hpp"
#include "bulkface/assembly.hpp"
#include "bulkface/geometry.hpp"
#include "bulkface/kernels.hpp"
#include "bulkface/solver.hpp"
#include "oracle.hpp"

using namespace bulkface;

TEST_SUITE("solver") {

TEST_CASE("pcg matches the dense LU oracle on an SPD system") {
  const CoupledGeometry g = build_rectangle_geometry(4, 4, GeometryMode::Full);
  SparseOperator A = assemble_unit_operator(g);
  const std::vector<double> mass = lumped_measures(g).concatenated();
  std::vector<double> shift(mass);
  for (double& v : shift) v *= 10.0;  // M/dt with dt = 0.1
  A.add_diagonal(shift);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> b(A.size());
  for (double& v : b) v = unif(rng);

  std::vector<double> x(A.size(), 0.0);
  const PcgResult res = pcg(A, b, x, 1e-13, 10000);
  CHECK(res.converged);
  CHECK(res.relative_residual <= 1e-13);

  const std::vector<double> x_ref = testing::lu_solve(testing::dense_from(A), b);
  double diff = 0.0, scale = 0.0;
  for (int i = 0; i < A.size(); ++i) {
    diff = std::max(diff, std::abs(x[i] - x_ref[i]));
    scale = std::max(scale, std::abs(x_ref[i]));
  }
  CHECK(diff <= 1e-11 * scale);
}

TEST_CASE("pcg is exact on diagonal systems and zero right sides") {
  SparseOperator D = SparseOperator::diagonal({2.0, 4.0, 8.0});
  std::vector<double> b{2.0, 8.0, 32.0};
  std::vector<double> x(3, 0.0);
  const PcgResult res = pcg(D, b, x, 1e-14, 100);
  CHECK(res.converged);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x[2] == doctest::Approx(4.0).epsilon(1e-14));

  std::vector<double> z{0.0, 0.0, 0.0};
  std::vector<double> x2{5.0, 5.0, 5.0};
  const PcgResult rz = pcg(D, z, x2, 1e-14, 100);
  CHECK(rz.converged);
  for (double v : x2) CHECK(v == 0.0);
}

TEST_CASE("smallest nonzero eigenvalue matches the dense route") {
  for (GeometryMode mode : {GeometryMode::BulkOnly, GeometryMode::Full}) {
    const CoupledGeometry g = build_rectangle_geometry(4, 4, mode);
    const SparseOperator A = assemble_unit_operator(g);
    const std::vector<double> mass = lumped_measures(g).concatenated();
    const EigenResult eig = smallest_nonzero_eigenvalue(A, mass, 1e-9, 10000);
    CHECK(eig.residual <= 1e-9);
    const double ref = testing::oracle_lambda1(g);
    CHECK(std::abs(eig.lambda - ref) <= 1e-8 * std::max(1.0, ref));
  }
}

TEST_CASE("eigenvector is mass-orthogonal to constants and satisfies the pencil") {
  const CoupledGeometry g = build_rectangle_geometry(6, 6, GeometryMode::Full);
  const SparseOperator A = assemble_unit_operator(g);
  const std::vector<double> mass = lumped_measures(g).concatenated();
  const EigenResult eig = smallest_nonzero_eigenvalue(A, mass, 1e-9, 10000);

  double mean = 0.0, msum = 0.0;
  for (int i = 0; i < A.size(); ++i) {
    mean += mass[i] * eig.eigenvector[i];
    msum += mass[i];
  }
  CHECK(std::abs(mean / msum) <= 1e-10);

  // A v = lambda M v up to the reported residual scale
  const std::vector<double> Av = A.apply(eig.eigenvector);
  double err = 0.0;
  for (int i = 0; i < A.size(); ++i)
    err += std::pow(Av[i] - eig.lambda * mass[i] * eig.eigenvector[i], 2) / mass[i];
  CHECK(std::sqrt(err) <= 1e-8);
}

}  // TEST_SUITE
