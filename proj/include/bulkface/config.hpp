#pragma once

#include <optional>
#include <string>

#include "bulkface/coefficients.hpp"
#include "bulkface/expression.hpp"
#include "bulkface/geometry.hpp"
#include "bulkface/timestepper.hpp"

namespace bulkface {

struct InitialSpec {
  enum class Kind { Constant, Piecewise, Expression };
  Kind kind = Kind::Constant;
  double value = 0.0;
  double value_plus = 0.0;
  double value_minus = 0.0;
  double value_gamma = 0.0;
  Expression expression;
};

struct ClampSpec {
  bool automatic = true;
  double l = 0.0;
  double L = 1.0;
};

struct OutputSpec {
  std::string dir = "out";
  std::string prefix = "run";
  int snapshot_every = 1;
};

// Fully validated run description. Exactly one of model/onsager is present;
// an onsager block means transform-then-run.
struct RunConfig {
  int nx = 16;
  int ny = 16;
  GeometryMode mode = GeometryMode::Full;

  std::optional<CoefficientModel> model;  // laws; clamp resolved separately
  std::optional<OnsagerModel> onsager;
  ClampSpec clamp;

  ForcingModel forcing;
  InitialSpec initial;
  TimeStepConfig time;
  OutputSpec output;

  bool uses_entropic_laws() const;
};

// Parses and validates a JSON config document. Unknown keys are rejected,
// defaults are applied; parse errors carry line/column, validation errors the
// offending key path.
RunConfig parse_config(const std::string& text);

// Serializes the (resolved) config; parse_config(write_config(c)) reproduces c.
std::string write_config(const RunConfig& cfg);

// Clamp window resolution from the initial data range: entropic laws use
// [min/2, max+1] and demand positive data; otherwise [min, max+1], widened to
// [min-1, max+1] for sign-changing data.
ClampBounds resolve_clamp(const RunConfig& cfg, double u0_min, double u0_max);

}  // namespace bulkface
