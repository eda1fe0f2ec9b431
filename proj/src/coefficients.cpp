#include "bulkface/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bulkface/errors.hpp"

namespace bulkface {

double clamp_value(double v, const ClampBounds& bounds) {
  if (v >= bounds.L) return bounds.L;
  if (v <= bounds.l) return bounds.l;
  return v;
}

double ScalarLaw::operator()(double v) const {
  switch (kind) {
    case ScalarLawKind::Constant: return kappa0;
    case ScalarLawKind::Power: return kappa0 * std::pow(v, rho - 1.0);
    case ScalarLawKind::Entropic: return 1.0 / (v * v);
  }
  return kappa0;
}

double eval_k(const ScalarLaw& law, const ClampBounds& bounds, double v) {
  if (law.kind == ScalarLawKind::Entropic && bounds.l <= 0.0)
    throw ConfigError("entropic diffusion law requires a positive clamp window (l > 0)");
  return law(clamp_value(v, bounds));
}

namespace {

double transmission_value(const TransmissionLaw& law, TransmissionSlot slot,
                          const TraceTriple& t) {
  switch (law.kind) {
    case TransmissionKind::Zero: return 0.0;
    case TransmissionKind::Constant: return law.value;
    case TransmissionKind::EntropicPair:
      switch (slot) {
        case TransmissionSlot::Plus: return law.M0 / (t.gamma * t.plus);
        case TransmissionSlot::Minus: return law.M0 / (t.gamma * t.minus);
        case TransmissionSlot::Gamma: return law.M0 / (t.plus * t.minus);
      }
  }
  return 0.0;
}

TraceTriple clamp_triple(const TraceTriple& t, const ClampBounds& b) {
  return {clamp_value(t.plus, b), clamp_value(t.minus, b), clamp_value(t.gamma, b)};
}

}  // namespace

double CoefficientModel::k_value(FieldId field, double v) const {
  if (onsager_direct) return onsager_k_value(*onsager_direct, clamp, field, v);
  switch (field) {
    case FieldId::Plus: return eval_k(k_plus, clamp, v);
    case FieldId::Minus: return eval_k(k_minus, clamp, v);
    case FieldId::Gamma: return eval_k(k_gamma, clamp, v);
  }
  return 0.0;
}

double CoefficientModel::k_gamma_value(const TraceTriple& t) const {
  // All realized interface laws read only the gamma component of the triple.
  return k_value(FieldId::Gamma, t.gamma);
}

TransmissionValues CoefficientModel::m_values(const TraceTriple& t) const {
  if (onsager_direct) return onsager_m_values(*onsager_direct, clamp, t);
  if ((m_plus.kind == TransmissionKind::EntropicPair ||
       m_minus.kind == TransmissionKind::EntropicPair ||
       m_gamma.kind == TransmissionKind::EntropicPair) &&
      clamp.l <= 0.0)
    throw ConfigError("entropic transmission laws require a positive clamp window (l > 0)");
  const TraceTriple c = clamp_triple(t, clamp);
  return {transmission_value(m_plus, TransmissionSlot::Plus, c),
          transmission_value(m_minus, TransmissionSlot::Minus, c),
          transmission_value(m_gamma, TransmissionSlot::Gamma, c)};
}

double ForcingLaw::operator()(double v) const {
  switch (kind) {
    case ForcingKind::Zero: return 0.0;
    case ForcingKind::Constant: return value;
    case ForcingKind::AllenCahn: return v - v * v * v;
    case ForcingKind::Polynomial: {
      double s = 0.0;
      for (std::size_t i = coeffs.size(); i-- > 0;) s = s * v + coeffs[i];
      return s;
    }
  }
  return 0.0;
}

bool ForcingLaw::is_zero() const {
  switch (kind) {
    case ForcingKind::Zero: return true;
    case ForcingKind::Constant: return value == 0.0;
    case ForcingKind::AllenCahn: return false;
    case ForcingKind::Polynomial:
      return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
  }
  return true;
}

bool ForcingLaw::dissipative() const {
  switch (kind) {
    case ForcingKind::Zero: return true;  // vacuous
    case ForcingKind::Constant: return value == 0.0;
    case ForcingKind::AllenCahn: return true;
    case ForcingKind::Polynomial: {
      std::size_t n = coeffs.size();
      while (n > 0 && coeffs[n - 1] == 0.0) --n;
      if (n == 0) return true;
      const std::size_t degree = n - 1;
      if (degree == 0) return coeffs[0] == 0.0;
      // -phi' stays positive at both infinities iff the leading degree is odd
      // with negative coefficient.
      return (degree % 2 == 1) && coeffs[degree] < 0.0;
    }
  }
  return false;
}

bool ForcingModel::all_zero() const {
  return f_plus.is_zero() && f_minus.is_zero() && f_gamma.is_zero() &&
         g_plus.is_zero() && g_minus.is_zero() && h_plus.is_zero() &&
         h_minus.is_zero() && h_gamma.is_zero();
}

bool ForcingModel::dissipative() const {
  return f_plus.dissipative() && f_minus.dissipative() && f_gamma.dissipative() &&
         g_plus.dissipative() && g_minus.dissipative() && h_plus.dissipative() &&
         h_minus.dissipative() && h_gamma.dissipative();
}

std::array<std::array<double, 3>, 3> eval_m_matrix(double mp, double mm, double mg) {
  if (mp < 0.0 || mm < 0.0 || mg < 0.0)
    throw Error("eval_m_matrix: transmission coefficients must be nonnegative");
  return {{{mp + mg, -mg, -mp},
           {-mg, mm + mg, -mm},
           {-mp, -mm, mp + mm}}};
}

double onsager_k_value(const OnsagerModel& om, const ClampBounds& bounds, FieldId field,
                       double theta) {
  if (bounds.l <= 0.0)
    throw ConfigError("temperature laws require a positive clamp window (l > 0)");
  const double th = clamp_value(theta, bounds);
  const ScalarLaw* K = nullptr;
  switch (field) {
    case FieldId::Plus: K = &om.K_plus; break;
    case FieldId::Minus: K = &om.K_minus; break;
    case FieldId::Gamma: K = &om.K_gamma; break;
  }
  return (*K)(th) / (th * th);
}

TransmissionValues onsager_m_values(const OnsagerModel& om, const ClampBounds& bounds,
                                    const TraceTriple& theta) {
  if (bounds.l <= 0.0)
    throw ConfigError("temperature laws require a positive clamp window (l > 0)");
  const TraceTriple th = clamp_triple(theta, bounds);
  const double Mp = transmission_value(om.M_plus, TransmissionSlot::Plus, th);
  const double Mm = transmission_value(om.M_minus, TransmissionSlot::Minus, th);
  const double Mg = transmission_value(om.M_gamma, TransmissionSlot::Gamma, th);
  return {Mp / (th.gamma * th.plus), Mm / (th.gamma * th.minus),
          Mg / (th.plus * th.minus)};
}

namespace {

ScalarLaw transform_scalar_law(const ScalarLaw& K) {
  switch (K.kind) {
    case ScalarLawKind::Constant:
      return {ScalarLawKind::Power, K.kappa0, -1.0};
    case ScalarLawKind::Power:
      return {ScalarLawKind::Power, K.kappa0, K.rho - 2.0};
    case ScalarLawKind::Entropic:
      return {ScalarLawKind::Power, 1.0, -3.0};
  }
  return K;
}

TransmissionLaw transform_transmission_law(const TransmissionLaw& M, const char* name) {
  switch (M.kind) {
    case TransmissionKind::Zero: return M;
    case TransmissionKind::Constant: {
      TransmissionLaw m;
      m.kind = TransmissionKind::EntropicPair;
      m.M0 = M.value;
      return m;
    }
    case TransmissionKind::EntropicPair:
      throw ConfigError(std::string(name) +
                        ": entropic_pair temperature transmission laws transform outside "
                        "the representable law kinds; use constant or zero");
  }
  return M;
}

}  // namespace

CoefficientModel onsager_to_u_model(const OnsagerModel& om, const ClampBounds& bounds) {
  if (bounds.l <= 0.0)
    throw ConfigError("onsager transform requires a positive clamp window (l > 0)");
  CoefficientModel m;
  m.k_plus = transform_scalar_law(om.K_plus);
  m.k_minus = transform_scalar_law(om.K_minus);
  m.k_gamma = transform_scalar_law(om.K_gamma);
  m.m_plus = transform_transmission_law(om.M_plus, "M_plus");
  m.m_minus = transform_transmission_law(om.M_minus, "M_minus");
  m.m_gamma = transform_transmission_law(om.M_gamma, "M_gamma");
  m.clamp = bounds;
  return m;
}

CoefficientModel onsager_direct_model(const OnsagerModel& om, const ClampBounds& bounds) {
  CoefficientModel m = onsager_to_u_model(om, bounds);
  m.onsager_direct = std::make_shared<OnsagerModel>(om);
  return m;
}

namespace {

struct MinMax {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  bool finite = true;

  void add(double v) {
    if (!std::isfinite(v)) {
      finite = false;
      return;
    }
    min = std::min(min, v);
    max = std::max(max, v);
  }
};

}  // namespace

AuditReport audit_assumptions(const CoefficientModel& model, int samples,
                              GeometryMode mode) {
  if (samples < 2) throw ConfigError("audit: samples must be >= 2");
  const ClampBounds& b = model.clamp;
  std::vector<double> grid(samples);
  for (int i = 0; i < samples; ++i)
    grid[i] = b.l + (b.L - b.l) * static_cast<double>(i) / (samples - 1);

  AuditReport rep;
  MinMax k;
  MinMax mp, mm, mg;
  try {
    for (double v : grid) k.add(model.k_value(FieldId::Plus, v));
    if (mode == GeometryMode::Full)
      for (double v : grid) k.add(model.k_value(FieldId::Minus, v));
    if (mode != GeometryMode::BulkOnly)
      for (double vp : grid)
        for (double vm : grid)
          for (double vg : grid) k.add(model.k_gamma_value({vp, vm, vg}));

    if (mode != GeometryMode::BulkOnly) {
      for (double vp : grid)
        for (double vm : grid)
          for (double vg : grid) {
            const TransmissionValues t = model.m_values({vp, vm, vg});
            mp.add(t.plus);
            mm.add(t.minus);
            mg.add(t.gamma);
          }
    }
  } catch (const ConfigError& e) {
    rep.ok = false;
    rep.message = e.what();
    return rep;
  }

  rep.k_min = k.min;
  rep.k_max = k.max;
  const bool k_ok = k.finite && k.min > 0.0;
  if (!k_ok) rep.message = "diffusion coefficients are not positively bounded below on the clamp window";

  bool m_ok = true;
  switch (mode) {
    case GeometryMode::BulkOnly:
      rep.m_min = 0.0;
      rep.m_max = 0.0;
      break;
    case GeometryMode::UpperOnly:
      rep.m_min = mp.min;
      rep.m_max = mp.max;
      m_ok = mp.finite && mp.min > 0.0;
      if (!m_ok) rep.message = "the bulk-interface transmission coefficient m_plus must be positive";
      break;
    case GeometryMode::Full: {
      std::array<double, 3> mins{mp.min, mm.min, mg.min};
      std::sort(mins.begin(), mins.end());
      rep.m_min = mins[1];  // bound certified by the two largest per-law minima
      rep.m_max = std::max({mp.max, mm.max, mg.max});
      m_ok = mp.finite && mm.finite && mg.finite && mins[1] > 0.0 &&
             mins[0] >= 0.0;
      if (!m_ok)
        rep.message =
            "fewer than two of the three transmission coefficients are positively bounded "
            "below on the clamp window";
      break;
    }
  }
  rep.ok = k_ok && m_ok;
  if (rep.ok) rep.message = "ok";
  return rep;
}

void require_audit_ok(const CoefficientModel& model, GeometryMode mode) {
  // Window corners carry the extrema for every law kind in play, so a
  // 2-point / 8-corner audit is exact here.
  const AuditReport rep = audit_assumptions(model, 2, mode);
  if (!rep.ok) throw AuditError("coefficient model failed the assumption audit: " + rep.message);
}

}  // namespace bulkface
