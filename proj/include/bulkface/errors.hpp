#pragma once

#include <stdexcept>
#include <string>

namespace bulkface {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration / validation problems (bad keys, bad law parameters, mode mismatches).
struct ConfigError : Error {
  using Error::Error;
};

// Requested a field or trace that does not exist in the current geometry mode.
struct ModeError : Error {
  using Error::Error;
};

// Coefficient model failed the ellipticity / transmission-positivity audit.
struct AuditError : Error {
  using Error::Error;
};

// Inner fixed-point iteration did not reach tolerance within picard_max sweeps.
struct PicardDiverged : Error {
  using Error::Error;
};

// Inner CG solve failed (non-finite values or iteration cap reached).
struct LinearSolveFailed : Error {
  using Error::Error;
};

// Step halving went below dt_min without recovering fixed-point convergence.
struct StepSizeUnderflow : Error {
  using Error::Error;
};

// Fewer than five snapshots carry a distance above the round-off floor.
struct InsufficientDecayData : Error {
  using Error::Error;
};

// Inverse iteration did not converge within the iteration cap.
struct EigenNotConverged : Error {
  using Error::Error;
};

// Nonpositive temperature handed to an entropy evaluation.
struct PositivityError : Error {
  using Error::Error;
};

}  // namespace bulkface
