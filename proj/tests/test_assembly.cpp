#include <doctest.h>

#include <cmath>
#include <random>

#include "bulkface/analysis.hpp"
#include "bulkface/assembly.hpp"
#include "bulkface/errors.hpp"
#include "oracle.hpp"

using namespace bulkface;

namespace {

CoefficientModel unit_constant_model(double k, double mp, double mm, double mg) {
  CoefficientModel m;
  m.k_plus = {ScalarLawKind::Constant, k, 1.0};
  m.k_minus = m.k_plus;
  m.k_gamma = m.k_plus;
  m.m_plus = {TransmissionKind::Constant, mp, 1.0};
  m.m_minus = {TransmissionKind::Constant, mm, 1.0};
  m.m_gamma = {TransmissionKind::Constant, mg, 1.0};
  m.clamp = {0.0, 1.0};
  return m;
}

CoefficientModel entropic_benchmark_model() {
  CoefficientModel m;
  m.k_plus = {ScalarLawKind::Entropic, 1.0, 1.0};
  m.k_minus = m.k_plus;
  m.k_gamma = m.k_plus;
  m.m_plus = {TransmissionKind::Constant, 1.0, 1.0};
  m.m_minus = {TransmissionKind::Zero, 0.0, 1.0};
  m.m_gamma = {TransmissionKind::Constant, 1.0, 1.0};
  m.clamp = {0.5, 3.0};
  return m;
}

StateVector random_state(const CoupledGeometry& geom, double lo, double hi,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  std::vector<double> flat(geom.total_unknowns());
  for (double& v : flat) v = unif(rng);
  return StateVector::from_flat(geom, flat);
}

}  // namespace

TEST_SUITE("assembly") {

TEST_CASE("local stiffness on the unit right triangle") {
  // single hand-built triangle (0,0), (1,0), (0,1) as its own bulk domain
  CoupledGeometry g;
  g.mode = GeometryMode::BulkOnly;
  g.plus.domain_tag = BulkMesh::DomainTag::Plus;
  g.plus.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  g.plus.triangles = {{0, 1, 2}};
  const CoefficientModel m = unit_constant_model(1.0, 0.0, 0.0, 0.0);
  const SparseOperator A = assemble_stiffness(g, m, StateVector::constant(g, 0.5));
  const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(A.entry(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));
}

TEST_CASE("mass operator is the lumped diagonal") {
  const CoupledGeometry g = build_rectangle_geometry(4, 4, GeometryMode::Full);
  const SparseOperator M = assemble_mass(g);
  double trace = 0.0;
  for (int i = 0; i < M.size(); ++i) {
    const double d = M.entry(i, i);
    CHECK(d > 0.0);
    trace += d;
  }
  CHECK(trace == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(M.nonzeros() == static_cast<std::size_t>(M.size()));

  const CoupledGeometry b = build_rectangle_geometry(3, 5, GeometryMode::BulkOnly);
  const SparseOperator Mb = assemble_mass(b);
  double tb = 0.0;
  for (int i = 0; i < Mb.size(); ++i) tb += Mb.entry(i, i);
  CHECK(tb == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stiffness kernel, symmetry and linearity in k") {
  const CoupledGeometry g = build_rectangle_geometry(5, 3, GeometryMode::Full);
  const StateVector w = random_state(g, 0.6, 2.5, 42);
  const CoefficientModel m1 = entropic_benchmark_model();
  const SparseOperator A = assemble_stiffness(g, m1, w);

  SUBCASE("constants span the kernel direction") {
    const std::vector<double> ones(g.total_unknowns(), 1.0);
    const std::vector<double> y = A.apply(ones);
    for (double v : y) CHECK(std::abs(v) <= 1e-13);
  }
  SUBCASE("assembly inserts symmetric pairs") { CHECK(A.max_abs_asymmetry() == 0.0); }
  SUBCASE("doubling kappa0 doubles every entry") {
    CoefficientModel half = unit_constant_model(1.0, 1.0, 1.0, 1.0);
    CoefficientModel twice = unit_constant_model(2.0, 1.0, 1.0, 1.0);
    const SparseOperator A1 = assemble_stiffness(g, half, w);
    const SparseOperator A2 = assemble_stiffness(g, twice, w);
    REQUIRE(A1.nonzeros() == A2.nonzeros());
    for (std::size_t k = 0; k < A1.values().size(); ++k)
      CHECK(A2.values()[k] == doctest::Approx(2.0 * A1.values()[k]).epsilon(1e-15));
  }
  SUBCASE("bulk blocks have the M-matrix sign pattern") {
    for (int i = 0; i < g.offset_gamma(); ++i)
      for (int k = A.row_offsets()[i]; k < A.row_offsets()[i + 1]; ++k) {
        if (A.columns()[k] == i)
          CHECK(A.values()[k] >= 0.0);
        else
          CHECK(A.values()[k] <= 1e-15);
      }
  }
}

TEST_CASE("transmission operator") {
  const CoupledGeometry g = build_rectangle_geometry(4, 4, GeometryMode::Full);
  const CoefficientModel m = unit_constant_model(1.0, 1.0, 1.0, 1.0);

  SUBCASE("equal traces are in the kernel") {
    StateVector w = random_state(g, -1.0, 1.0, 7);
    for (int j = 0; j < g.n_gamma(); ++j) {
      const double c = w.gamma[j];
      w.plus[g.trace_plus[j]] = c;
      w.minus[g.trace_minus[j]] = c;
    }
    const SparseOperator M = assemble_transmission(g, m, w);
    const std::vector<double> y = M.apply(w.flat());
    for (double v : y) CHECK(std::abs(v) <= 1e-13);
  }
  SUBCASE("zero laws give the zero operator") {
    const CoefficientModel z = unit_constant_model(1.0, 0.0, 0.0, 0.0);
    const SparseOperator M = assemble_transmission(g, z, random_state(g, 0.0, 1.0, 9));
    for (double v : M.values()) CHECK(v == 0.0);
  }
  SUBCASE("bulk_only mode is a contract violation") {
    const CoupledGeometry b = build_rectangle_geometry(4, 4, GeometryMode::BulkOnly);
    CHECK_THROWS_AS((void)assemble_transmission(b, m, StateVector::constant(b, 1.0)),
                    ModeError);
  }
  SUBCASE("upper_only reduces to the m_plus pair coupling") {
    const CoupledGeometry u = build_rectangle_geometry(4, 4, GeometryMode::UpperOnly);
    const StateVector w = random_state(u, 0.0, 1.0, 13);
    const SparseOperator M = assemble_transmission(u, m, w);
    const Measures meas = lumped_measures(u);
    double expected = 0.0;
    for (int j = 0; j < u.n_gamma(); ++j) {
      const double d = w.plus[u.trace_plus[j]] - w.gamma[j];
      expected += meas.lumped_interface[j] * d * d;
    }
    CHECK(M.quadratic_form(w.flat()) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("operator matches the dense oracle entrywise") {
  const CoupledGeometry g = build_rectangle_geometry(3, 2, GeometryMode::Full);
  const CoefficientModel m = entropic_benchmark_model();
  const StateVector w = random_state(g, 0.7, 2.8, 21);
  const SparseOperator A = assemble_operator(g, m, w);
  const testing::DenseMatrix D = testing::oracle_operator(g, m, w);
  double max_diff = 0.0;
  for (int i = 0; i < A.size(); ++i)
    for (int j = 0; j < A.size(); ++j)
      max_diff = std::max(max_diff, std::abs(A.entry(i, j) - D(i, j)));
  CHECK(max_diff <= 1e-13);
}

TEST_CASE("operator is PSD with a one-dimensional kernel") {
  const CoupledGeometry g = build_rectangle_geometry(2, 2, GeometryMode::Full);
  const CoefficientModel m = entropic_benchmark_model();
  const StateVector w = random_state(g, 0.6, 2.9, 33);
  const SparseOperator A = assemble_operator(g, m, w);

  SUBCASE("random quadratic forms are nonnegative") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> x(g.total_unknowns());
      for (double& v : x) v = unif(rng);
      double xx = 0.0;
      for (double v : x) xx += v * v;
      CHECK(A.quadratic_form(x) >= -1e-12 * xx);
    }
  }
  SUBCASE("dense eigensolve sees exactly one zero eigenvalue") {
    const testing::DenseMatrix D = testing::dense_from(A);
    const std::vector<double> m_diag = testing::oracle_mass_diag(g);
    testing::DenseMatrix S(A.size(), A.size());
    for (int i = 0; i < A.size(); ++i)
      for (int j = 0; j < A.size(); ++j)
        S(i, j) = D(i, j) / std::sqrt(m_diag[i] * m_diag[j]);
    const std::vector<double> ev = testing::jacobi_eigenvalues(S);
    CHECK(std::abs(ev[0]) <= 1e-12);
    CHECK(ev[1] > 1e-3);
  }
}

TEST_CASE("frozen operator is Lipschitz in the frozen state") {
  const CoupledGeometry g = build_rectangle_geometry(4, 4, GeometryMode::Full);
  CoefficientModel m = entropic_benchmark_model();

  // sampled Lipschitz constant of the laws on the clamp window
  double law_lip = 0.0;
  for (int s = 0; s < 200; ++s) {
    const double v = m.clamp.l + (m.clamp.L - m.clamp.l) * s / 199.0;
    const double h = 1e-6;
    const double d = std::abs(m.k_value(FieldId::Plus, v + h) -
                              m.k_value(FieldId::Plus, v - h)) / (2.0 * h);
    law_lip = std::max(law_lip, d);
  }
  // geometric scale: largest entry magnitude of the unit-coefficient operator
  const SparseOperator G = assemble_unit_operator(g);
  double geom_factor = 0.0;
  for (double v : G.values()) geom_factor = std::max(geom_factor, std::abs(v));
  const double C = 4.0 * law_lip * geom_factor;

  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unif(m.clamp.l, m.clamp.L);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> w1(g.total_unknowns()), w2(g.total_unknowns());
    for (int i = 0; i < g.total_unknowns(); ++i) {
      w1[i] = unif(rng);
      w2[i] = unif(rng);
    }
    const SparseOperator A1 = assemble_operator(g, m, StateVector::from_flat(g, w1));
    const SparseOperator A2 = assemble_operator(g, m, StateVector::from_flat(g, w2));
    REQUIRE(A1.nonzeros() == A2.nonzeros());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < A1.values().size(); ++k)
      num = std::max(num, std::abs(A1.values()[k] - A2.values()[k]));
    for (int i = 0; i < g.total_unknowns(); ++i)
      den = std::max(den, std::abs(w1[i] - w2[i]));
    CHECK(num <= C * den);
  }
}

TEST_CASE("load vector") {
  const CoupledGeometry g = build_rectangle_geometry(4, 4, GeometryMode::Full);
  const Measures meas = lumped_measures(g);
  const StateVector w = StateVector::constant(g, 1.0);

  SUBCASE("all-zero forcing") {
    const std::vector<double> r = assemble_rhs(g, ForcingModel{}, w);
    for (double v : r) CHECK(v == 0.0);
  }
  SUBCASE("unit volume forcing recovers the lumped measures") {
    ForcingModel f;
    f.f_plus = {ForcingKind::Constant, 1.0, {}};
    const std::vector<double> r = assemble_rhs(g, f, w);
    for (int v = 0; v < g.n_plus(); ++v)
      CHECK(r[v] == doctest::Approx(meas.lumped_plus[v]).epsilon(1e-15));
    for (int i = g.n_plus(); i < g.total_unknowns(); ++i) CHECK(r[i] == 0.0);
  }
  SUBCASE("cubic law vanishes at its root") {
    ForcingModel f;
    f.f_plus = {ForcingKind::AllenCahn, 0.0, {}};
    f.f_minus = f.f_plus;
    f.f_gamma = f.f_plus;
    const std::vector<double> r = assemble_rhs(g, f, w);
    for (double v : r) CHECK(v == 0.0);
  }
  SUBCASE("surface and boundary terms land on the right rows") {
    ForcingModel f;
    f.g_plus = {ForcingKind::Constant, 1.0, {}};
    f.h_plus = {ForcingKind::Constant, 1.0, {}};
    f.h_gamma = {ForcingKind::Constant, 1.0, {}};
    const std::vector<double> r = assemble_rhs(g, f, w);
    double g_total = 0.0, outer_total = 0.0, gamma_total = 0.0;
    for (int v = 0; v < g.n_plus(); ++v) {
      const auto& p = g.plus.vertices[v];
      if (std::abs(p[1]) < 1e-14)
        g_total += r[v];
      else
        outer_total += r[v];
    }
    for (int j = 0; j < g.n_gamma(); ++j) gamma_total += r[g.offset_gamma() + j];
    // g integrates to |Gamma| = 1, but the two interface corners also carry
    // half-edge contributions of h from the adjacent vertical sides
    CHECK(g_total == doctest::Approx(1.0 + 2.0 * 0.5 / 4.0).epsilon(1e-13));
    CHECK(outer_total == doctest::Approx(3.0 - 2.0 * 0.5 / 4.0).epsilon(1e-13));
    CHECK(gamma_total == doctest::Approx(2.0).epsilon(1e-15));  // two endpoint h terms
  }
}

TEST_CASE("audit failure propagates") {
  const CoupledGeometry g = build_rectangle_geometry(2, 2, GeometryMode::Full);
  const CoefficientModel bad = unit_constant_model(1.0, 1.0, 0.0, 0.0);
  CHECK_THROWS_AS((void)assemble_stiffness(g, bad, StateVector::constant(g, 1.0)),
                  AuditError);
}

}  // TEST_SUITE
