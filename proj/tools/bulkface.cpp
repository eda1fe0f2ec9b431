// Command-line driver. Subcommands:
//   simulate         run a config and write diagnostics + snapshot CSVs
//   poincare         coupled Poincare constant + random-state verification
//   decay            run, fit the decay rate, verify the exponential bound
//   pme              single-bulk power-law run with conservation checks
//   onsager-compare  temperature model vs transformed state model
//   audit            coefficient assumption report
// Exit codes: 0 ok, 1 validation error, 2 solver failure, 3 property violation.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "bulkface/analysis.hpp"
#include "bulkface/app.hpp"
#include "bulkface/errors.hpp"
#include "bulkface/kernels.hpp"
#include "bulkface/solver.hpp"

namespace {

using namespace bulkface;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  bool quiet = false;
  bool dump_mesh = false;
  bool dump_operator = false;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

RunConfig load_config(const Options& opt) {
  RunConfig cfg = parse_config(read_file(opt.config_path));
  if (!opt.out_dir.empty()) cfg.output.dir = opt.out_dir;
  return cfg;
}

void info(const Options& opt, const std::string& line) {
  if (!opt.quiet) std::cout << line << '\n';
}

int cmd_simulate(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const RunArtifacts art = run_from_config(cfg);
  write_run_outputs(art, cfg.output.dir, opt.dump_mesh, opt.dump_operator);
  info(opt, "simulate: " + std::to_string(art.trace.diagnostics.size()) + " steps to t = " +
               std::to_string(art.trace.t_final) + ", outputs in " + cfg.output.dir);
  if (art.prep.forcing.all_zero()) {
    const MaximumPrincipleReport mp = check_maximum_principle(
        art.trace, art.prep.u0.min_value(), art.prep.u0.max_value());
    if (!mp.pass) {
      std::cerr << "simulate: maximum principle violated (overshoot "
                << mp.overshoot << ", undershoot " << mp.undershoot << ")\n";
      return 3;
    }
  }
  return 0;
}

int cmd_decay(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const RunArtifacts art = run_from_config(cfg);
  const DecayFit fit =
      fit_decay_rate(art.prep.geom, art.trace, art.trace.u_infinity);

  const double dist0 =
      l22_distance(art.prep.geom, art.trace.snapshots.front(), art.trace.u_infinity);
  bool bound_ok = true;
  for (std::size_t i = 0; i < art.trace.snapshots.size(); ++i) {
    const double t = art.trace.times[i];
    if (t > fit.window_end + 1e-12) break;
    const double d =
        l22_distance(art.prep.geom, art.trace.snapshots[i], art.trace.u_infinity);
    if (d > dist0 * std::exp(-fit.delta_hat * t) * 1.001) bound_ok = false;
  }

  write_run_outputs(art, cfg.output.dir, false, false);
  const std::string prefix = cfg.output.dir + "/" + cfg.output.prefix;
  write_decay_csv(prefix + "_decay.csv", fit, bound_ok);
  info(opt, "decay: delta_hat = " + std::to_string(fit.delta_hat) +
               ", r^2 = " + std::to_string(fit.r_squared) +
               (bound_ok ? ", bound ok" : ", bound violated"));
  if (!(fit.delta_hat > 0.0) || fit.r_squared < 0.99 || !bound_ok) return 3;
  return 0;
}

int cmd_pme(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  if (cfg.mode != GeometryMode::BulkOnly)
    throw ConfigError("pme: requires geometry.mode = \"bulk_only\"");
  if (!cfg.model || cfg.model->k_plus.kind != ScalarLawKind::Power)
    throw ConfigError("pme: requires model.k_plus of kind \"power\"");

  const RunArtifacts art = run_from_config(cfg);
  write_run_outputs(art, cfg.output.dir, false, false);

  bool positive = true;
  for (const StepDiagnostics& d : art.trace.diagnostics)
    if (!(d.min_u > 0.0)) positive = false;

  const double mass0 = total_mass(art.prep.geom, art.trace.snapshots.front());
  double drift = 0.0;
  for (const StepDiagnostics& d : art.trace.diagnostics)
    drift = std::max(drift, std::abs(d.mass - mass0) / std::abs(mass0));

  const DecayFit fit =
      fit_decay_rate(art.prep.geom, art.trace, art.trace.u_infinity);
  const double spread =
      art.trace.final_state.max_value() - art.trace.final_state.min_value();

  const std::string prefix = cfg.output.dir + "/" + cfg.output.prefix;
  {
    std::ofstream os(prefix + "_pme.csv", std::ios::binary);
    os << "rho,final_max_minus_min,mass_drift,delta_hat\n";
    os << format_float(cfg.model->k_plus.rho) << ',' << format_float(spread) << ','
       << format_float(drift) << ',' << format_float(fit.delta_hat) << '\n';
  }
  info(opt, "pme: rho = " + std::to_string(cfg.model->k_plus.rho) +
               ", final max-min = " + std::to_string(spread) +
               ", mass drift = " + std::to_string(drift));
  if (!positive || drift > 1e-9 || !(fit.delta_hat > 0.0)) return 3;
  return 0;
}

int cmd_onsager_compare(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  if (!cfg.onsager) throw ConfigError("onsager-compare: config must provide 'onsager'");

  const RunArtifacts art = run_from_config(cfg);  // transformed-law route
  const CoefficientModel direct =
      onsager_direct_model(*cfg.onsager, art.prep.model.clamp);
  const SimulationTrace trace_b = run(art.prep.geom, direct, art.prep.forcing,
                                      art.prep.u0, art.prep.resolved.time);

  double discrepancy = 0.0;
  const std::size_t n =
      std::min(art.trace.snapshots.size(), trace_b.snapshots.size());
  bool aligned = art.trace.snapshots.size() == trace_b.snapshots.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(art.trace.times[i] - trace_b.times[i]) > 1e-12) aligned = false;
    const std::vector<double> a = art.trace.snapshots[i].flat();
    const std::vector<double> b = trace_b.snapshots[i].flat();
    discrepancy = std::max(discrepancy, max_abs_diff(a, b));
  }
  if (!aligned) discrepancy = std::numeric_limits<double>::infinity();

  const EntropyTrace ent = entropy_trace(art.prep.geom, *cfg.onsager, art.trace);
  double min_increment = 0.0;
  for (std::size_t i = 1; i < ent.entropy_values.size(); ++i)
    min_increment =
        std::min(min_increment, ent.entropy_values[i] - ent.entropy_values[i - 1]);
  const bool monotone = min_increment >= -1e-10;

  write_run_outputs(art, cfg.output.dir, false, false);
  const std::string prefix = cfg.output.dir + "/" + cfg.output.prefix;
  {
    std::ofstream os(prefix + "_onsager.csv", std::ios::binary);
    os << "max_discrepancy,entropy_monotone,min_entropy_increment\n";
    os << format_float(discrepancy) << ',' << (monotone ? 1 : 0) << ','
       << format_float(min_increment) << '\n';
  }
  info(opt, "onsager-compare: max trajectory discrepancy = " +
               std::to_string(discrepancy) +
               (monotone ? ", entropy nondecreasing" : ", entropy decreased"));
  if (discrepancy > 1e-9 || !monotone) return 3;
  return 0;
}

int cmd_poincare(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const CoupledGeometry geom = build_rectangle_geometry(cfg.nx, cfg.ny, cfg.mode);
  const PoincareReport rep = poincare_constant(geom);

  // verify the inequality on seeded random states
  const SparseOperator A = assemble_unit_operator(geom);
  const Measures meas = lumped_measures(geom);
  const std::vector<double> w = meas.concatenated();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(-1.0, 2.0);
  int violations = 0;
  for (int s = 0; s < 1000; ++s) {
    std::vector<double> u(w.size());
    for (double& v : u) v = unif(rng);
    const double mean = dot(w, u) / meas.V;
    double lhs = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      lhs += w[i] * (u[i] - mean) * (u[i] - mean);
    const double rhs = rep.C * A.quadratic_form(u);
    if (lhs > rhs * (1.0 + 1e-8) + 1e-13) ++violations;
  }

  std::filesystem::create_directories(cfg.output.dir);
  const std::string prefix = cfg.output.dir + "/" + cfg.output.prefix;
  write_poincare_csv(prefix + "_poincare.csv", rep);
  info(opt, "poincare: lambda1 = " + std::to_string(rep.lambda1) +
               ", C = " + std::to_string(rep.C) + ", residual = " +
               std::to_string(rep.residual) + ", violations = " +
               std::to_string(violations) + "/1000");
  return violations == 0 ? 0 : 3;
}

int cmd_audit(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const PreparedRun prep = prepare_run(cfg);
  const AuditReport rep = audit_assumptions(prep.model, 33, cfg.mode);
  std::cout << "audit: k in [" << format_float(rep.k_min) << ", "
            << format_float(rep.k_max) << "], m in [" << format_float(rep.m_min)
            << ", " << format_float(rep.m_max) << "]\n";
  std::cout << "audit: " << rep.message << '\n';
  return rep.ok ? 0 : 1;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config_path, "config file (JSON)")->required();
  sub->add_option("--out", opt.out_dir, "output directory (overrides output.dir)");
  sub->add_option("--seed", opt.seed, "seed for random-state checks");
  sub->add_flag("--quiet", opt.quiet, "suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bulkface: coupled bulk-interface nonlinear diffusion simulator"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* simulate = app.add_subcommand("simulate", "run a config and write CSV outputs");
  add_common(simulate, opt);
  simulate->add_flag("--dump-mesh", opt.dump_mesh, "also write the mesh CSV");
  simulate->add_flag("--dump-operator", opt.dump_operator,
                     "also write the initial operator in coordinate format");
  CLI::App* poincare = app.add_subcommand("poincare", "coupled Poincare constant");
  add_common(poincare, opt);
  CLI::App* decay = app.add_subcommand("decay", "fit and verify the decay rate");
  add_common(decay, opt);
  CLI::App* pme = app.add_subcommand("pme", "single-bulk power-law diffusion run");
  add_common(pme, opt);
  CLI::App* onsager =
      app.add_subcommand("onsager-compare", "temperature vs transformed state model");
  add_common(onsager, opt);
  CLI::App* audit = app.add_subcommand("audit", "coefficient assumption report");
  add_common(audit, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(opt);
    if (poincare->parsed()) return cmd_poincare(opt);
    if (decay->parsed()) return cmd_decay(opt);
    if (pme->parsed()) return cmd_pme(opt);
    if (onsager->parsed()) return cmd_onsager_compare(opt);
    if (audit->parsed()) return cmd_audit(opt);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const AuditError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return 1;
}
