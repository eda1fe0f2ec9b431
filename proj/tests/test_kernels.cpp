#include <doctest.h>

#include <random>
#include <vector>

#include "bulkface/assembly.hpp"
#include "bulkface/geometry.hpp"
#include "bulkface/kernels.hpp"

using namespace bulkface;

namespace {

struct ThreadCountGuard {
  int saved = thread_count();
  ~ThreadCountGuard() { set_thread_count(saved); }
};

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = unif(rng);
  return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("reductions are bit-identical across thread counts") {
  ThreadCountGuard guard;
  const std::vector<double> a = random_vector(100000, 1);
  const std::vector<double> b = random_vector(100000, 2);

  set_thread_count(1);
  const double d1 = dot(a, b);
  const double n1 = norm2(a);
  for (int t : {2, 3, 4, 8}) {
    set_thread_count(t);
    CHECK(dot(a, b) == d1);
    CHECK(norm2(a) == n1);
  }
  // and they agree with the plain serial reference to round-off
  const double ds = serial::dot(a, b);
  CHECK(std::abs(d1 - ds) <= 1e-12 * std::abs(ds));
}

TEST_CASE("spmv equals the serial reference exactly") {
  ThreadCountGuard guard;
  const CoupledGeometry g = build_rectangle_geometry(24, 24, GeometryMode::Full);
  CoefficientModel m;
  m.k_plus = {ScalarLawKind::Constant, 1.0, 1.0};
  m.k_minus = m.k_plus;
  m.k_gamma = m.k_plus;
  m.m_plus = {TransmissionKind::Constant, 1.0, 1.0};
  m.m_minus = m.m_plus;
  m.m_gamma = m.m_plus;
  m.clamp = {0.0, 1.0};
  const SparseOperator A = assemble_operator(g, m, StateVector::constant(g, 0.5));
  const std::vector<double> x = random_vector(A.size(), 3);

  std::vector<double> y_ref(A.size());
  serial::spmv(A.size(), A.row_offsets().data(), A.columns().data(), A.values().data(),
               x.data(), y_ref.data());
  for (int t : {1, 2, 4}) {
    set_thread_count(t);
    std::vector<double> y(A.size());
    A.apply(x, y);
    CHECK(y == y_ref);  // row sums are accumulated in the same order
  }
}

TEST_CASE("axpy and xpby") {
  std::vector<double> y{1.0, 2.0, 3.0};
  const std::vector<double> x{10.0, 20.0, 30.0};
  axpy(0.5, x, y);
  CHECK(y == std::vector<double>{6.0, 12.0, 18.0});
  xpby(x, 2.0, y);
  CHECK(y == std::vector<double>{22.0, 44.0, 66.0});
}

TEST_CASE("assembly is bit-identical across thread counts") {
  ThreadCountGuard guard;
  const CoupledGeometry g = build_rectangle_geometry(32, 32, GeometryMode::Full);
  CoefficientModel m;
  m.k_plus = {ScalarLawKind::Entropic, 1.0, 1.0};
  m.k_minus = m.k_plus;
  m.k_gamma = m.k_plus;
  m.m_plus = {TransmissionKind::Constant, 1.0, 1.0};
  m.m_minus = {TransmissionKind::Zero, 0.0, 1.0};
  m.m_gamma = {TransmissionKind::Constant, 1.0, 1.0};
  m.clamp = {0.5, 3.0};
  const std::vector<double> flat = random_vector(g.total_unknowns(), 4);
  std::vector<double> w(flat);
  for (double& v : w) v = 1.75 + 0.5 * v;  // inside the clamp window
  const StateVector state = StateVector::from_flat(g, w);

  set_thread_count(1);
  const SparseOperator A1 = assemble_operator(g, m, state);
  for (int t : {2, 4, 8}) {
    set_thread_count(t);
    const SparseOperator At = assemble_operator(g, m, state);
    REQUIRE(At.values().size() == A1.values().size());
    CHECK(At.values() == A1.values());
    CHECK(At.columns() == A1.columns());
  }
}

}  // TEST_SUITE
