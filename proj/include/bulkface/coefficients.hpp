#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "bulkface/geometry.hpp"

namespace bulkface {

// Truncation window [l, L]. Coefficient laws are always evaluated at the
// clamped state, which restores uniform bounds; along admissible orbits the
// maximum principle keeps the state inside the window, so the clamp is
// inactive there.
struct ClampBounds {
  double l = 0.0;
  double L = 1.0;
};

double clamp_value(double v, const ClampBounds& bounds);

enum class ScalarLawKind { Constant, Power, Entropic };

// Diffusion law for one field. Evaluation rules:
//   constant: kappa0
//   power:    kappa0 * v^(rho-1)
//   entropic: 1/v^2   (window must satisfy l > 0)
struct ScalarLaw {
  ScalarLawKind kind = ScalarLawKind::Constant;
  double kappa0 = 1.0;
  double rho = 1.0;

  double operator()(double v) const;
};

enum class TransmissionKind { Constant, EntropicPair, Zero };

enum class TransmissionSlot { Plus, Minus, Gamma };

// Transmission law for one slot of the interface coupling. Evaluation rules
// at the trace triple (v+, v-, vG):
//   constant:      value
//   zero:          0
//   entropic_pair: plus  -> M0/(vG*v+),  minus -> M0/(vG*v-),  gamma -> M0/(v+*v-)
struct TransmissionLaw {
  TransmissionKind kind = TransmissionKind::Zero;
  double value = 0.0;
  double M0 = 1.0;
};

struct TraceTriple {
  double plus = 0.0;
  double minus = 0.0;
  double gamma = 0.0;
};

struct TransmissionValues {
  double plus = 0.0;
  double minus = 0.0;
  double gamma = 0.0;
};

enum class FieldId { Plus, Minus, Gamma };

struct OnsagerModel;

struct CoefficientModel {
  ScalarLaw k_plus, k_minus, k_gamma;
  TransmissionLaw m_plus, m_minus, m_gamma;
  ClampBounds clamp;
  // When set, every coefficient evaluation goes through the value-level
  // temperature transform instead of the mapped laws above (second algebraic
  // route used by the consistency checks).
  std::shared_ptr<const OnsagerModel> onsager_direct;

  // Clamped law values. k_gamma reads the gamma component of the trace triple.
  double k_value(FieldId field, double v) const;
  double k_gamma_value(const TraceTriple& t) const;
  TransmissionValues m_values(const TraceTriple& t) const;
};

enum class ForcingKind { Zero, Constant, AllenCahn, Polynomial };

// Semilinear forcing law. allen_cahn is v - v^3; polynomial holds
// coefficients c0 + c1 v + ... in increasing degree.
struct ForcingLaw {
  ForcingKind kind = ForcingKind::Zero;
  double value = 0.0;
  std::vector<double> coeffs;

  double operator()(double v) const;
  bool is_zero() const;
  // liminf_{|v|->inf} -phi'(v) > 0
  bool dissipative() const;
};

struct ForcingModel {
  ForcingLaw f_plus, f_minus, f_gamma;
  ForcingLaw g_plus, g_minus;
  ForcingLaw h_plus, h_minus, h_gamma;

  bool all_zero() const;
  bool dissipative() const;
};

// Entropic reformulation data: specific heats plus conductivity laws in the
// temperature variable.
struct OnsagerModel {
  double c_plus = 1.0, c_minus = 1.0, c_gamma = 1.0;
  ScalarLaw K_plus, K_minus, K_gamma;
  TransmissionLaw M_plus{TransmissionKind::Constant, 1.0, 1.0};
  TransmissionLaw M_minus{TransmissionKind::Constant, 1.0, 1.0};
  TransmissionLaw M_gamma{TransmissionKind::Constant, 1.0, 1.0};
};

// 3x3 transmission coefficient matrix in (+, -, G) ordering. Symmetric PSD
// with zero row sums; the quadratic form is
//   mg (r+ - r-)^2 + mp (r+ - rG)^2 + mm (r- - rG)^2.
std::array<std::array<double, 3>, 3> eval_m_matrix(double mp, double mm, double mg);

double eval_k(const ScalarLaw& law, const ClampBounds& bounds, double v);

// Structural transform of temperature laws into state laws:
//   k = K/theta^2 per bulk field and on the interface, m+- = M+-/(thetaG theta+-),
//   mG = MG/(theta+ theta-). Closed over the law kinds except M of kind
//   entropic_pair, which is rejected.
CoefficientModel onsager_to_u_model(const OnsagerModel& om, const ClampBounds& bounds);

// Same flow, second route: evaluate the temperature laws on the fly at every
// coefficient query instead of mapping them structurally.
CoefficientModel onsager_direct_model(const OnsagerModel& om, const ClampBounds& bounds);

// Value-level transform for spot checks.
double onsager_k_value(const OnsagerModel& om, const ClampBounds& bounds, FieldId field,
                       double theta);
TransmissionValues onsager_m_values(const OnsagerModel& om, const ClampBounds& bounds,
                                    const TraceTriple& theta);

struct AuditReport {
  double k_min = 0.0;
  double k_max = 0.0;
  double m_min = 0.0;
  double m_max = 0.0;
  bool ok = false;
  std::string message;
};

// Samples every law on a uniform grid over the clamp window ([l,L] for the
// bulk diffusion laws, [l,L]^3 for the interface laws) and checks the
// ellipticity and transmission-positivity requirements for the given mode:
// full mode needs at least two of the three transmission minima positive;
// upper_only needs m+ positive; bulk_only only audits k+.
AuditReport audit_assumptions(const CoefficientModel& model, int samples,
                              GeometryMode mode = GeometryMode::Full);

// Corner check used as the assembly precondition; all law kinds are monotone
// on the window, so window corners carry the extrema.
void require_audit_ok(const CoefficientModel& model, GeometryMode mode);

}  // namespace bulkface
