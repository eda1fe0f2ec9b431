// Serial-reference vs parallel-kernel benchmark: spmv, reductions, operator
// assembly and one implicit step on a large single-bulk mesh. The parallel
// kernels must agree with the serial reference to round-off and be
// bit-identical across thread counts; this driver reports times and the
// observed agreement.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "bulkface/analysis.hpp"
#include "bulkface/assembly.hpp"
#include "bulkface/kernels.hpp"
#include "bulkface/timestepper.hpp"

using namespace bulkface;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int nx = 384;
  int threads = thread_count();
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--nx" && i + 1 < argc) nx = std::atoi(argv[++i]);
    else if (std::string(argv[i]) == "--threads" && i + 1 < argc) threads = std::atoi(argv[++i]);
  }
  if (threads < 1) threads = 1;

  std::printf("bench: bulk_only %dx%d, comparing 1 thread vs %d threads\n", nx, nx,
              threads);

  const CoupledGeometry geom = build_rectangle_geometry(nx, nx, GeometryMode::BulkOnly);
  const int n = geom.total_unknowns();
  std::printf("bench: %d unknowns\n", n);

  CoefficientModel model;
  model.k_plus = {ScalarLawKind::Power, 1.0, 2.0};
  model.clamp = {0.25, 4.0};

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  std::vector<double> x(n), y(n), y_ref(n);
  for (double& v : x) v = unif(rng);
  const StateVector w = StateVector::from_flat(geom, x);

  set_thread_count(1);
  const SparseOperator A = assemble_operator(geom, model, w);

  // --- spmv
  const auto& rp = A.row_offsets();
  const auto& ci = A.columns();
  const auto& vv = A.values();
  const double t_spmv_serial = time_best_of(5, [&] {
    for (int r = 0; r < 20; ++r) serial::spmv(n, rp.data(), ci.data(), vv.data(), x.data(), y_ref.data());
  });
  set_thread_count(threads);
  const double t_spmv_par = time_best_of(5, [&] {
    for (int r = 0; r < 20; ++r) spmv(n, rp.data(), ci.data(), vv.data(), x.data(), y.data());
  });
  std::printf("spmv x20:        serial %8.4f s   parallel %8.4f s   speedup %5.2fx   max|diff| %.3g\n",
              t_spmv_serial, t_spmv_par, t_spmv_serial / t_spmv_par, max_abs_diff(y, y_ref));

  // --- dot
  double d_par = 0.0, d_ser = 0.0;
  set_thread_count(1);
  const double t_dot_serial =
      time_best_of(5, [&] { for (int r = 0; r < 50; ++r) d_ser = serial::dot(x, x); });
  set_thread_count(threads);
  const double t_dot_par =
      time_best_of(5, [&] { for (int r = 0; r < 50; ++r) d_par = dot(x, x); });
  std::printf("dot x50:         serial %8.4f s   parallel %8.4f s   speedup %5.2fx   rel diff %.3g\n",
              t_dot_serial, t_dot_par, t_dot_serial / t_dot_par,
              std::abs(d_par - d_ser) / std::abs(d_ser));

  // --- assembly
  set_thread_count(1);
  const double t_asm_serial =
      time_best_of(3, [&] { (void)assemble_operator(geom, model, w); });
  set_thread_count(threads);
  SparseOperator A_par;
  const double t_asm_par =
      time_best_of(3, [&] { A_par = assemble_operator(geom, model, w); });
  double asm_diff = 0.0;
  for (std::size_t k = 0; k < vv.size(); ++k)
    asm_diff = std::max(asm_diff, std::abs(vv[k] - A_par.values()[k]));
  std::printf("assemble:        serial %8.4f s   parallel %8.4f s   speedup %5.2fx   max|diff| %.3g\n",
              t_asm_serial, t_asm_par, t_asm_serial / t_asm_par, asm_diff);

  // --- one implicit step
  TimeStepConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1e-3;
  const StateVector u0 = w;
  set_thread_count(1);
  const double t_step_serial =
      time_best_of(1, [&] { (void)step_implicit(geom, model, ForcingModel{}, u0, cfg.dt, cfg); });
  set_thread_count(threads);
  const double t_step_par =
      time_best_of(1, [&] { (void)step_implicit(geom, model, ForcingModel{}, u0, cfg.dt, cfg); });
  std::printf("implicit step:   serial %8.4f s   parallel %8.4f s   speedup %5.2fx\n",
              t_step_serial, t_step_par, t_step_serial / t_step_par);

  return 0;
}
