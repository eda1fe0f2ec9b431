#include "bulkface/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <initializer_list>
#include <string>

#include "bulkface/errors.hpp"

namespace bulkface {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) bad(path + "." + item.key(), "unknown key");
  }
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) bad(path + "." + key, "missing required key");
    return fallback;
  }
  if (!obj[key].is_number()) bad(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback,
            bool required = false) {
  if (!obj.contains(key)) {
    if (required) bad(path + "." + key, "missing required key");
    return fallback;
  }
  if (!obj[key].is_number_integer()) bad(path + "." + key, "expected an integer");
  return obj[key].get<int>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) bad(path + "." + key, "missing required key");
    return fallback;
  }
  if (!obj[key].is_string()) bad(path + "." + key, "expected a string");
  return obj[key].get<std::string>();
}

ScalarLaw parse_scalar_law(const json& obj, const std::string& path) {
  if (!obj.is_object()) bad(path, "expected an object");
  check_keys(obj, path, {"kind", "kappa0", "rho"});
  const std::string kind = get_string(obj, path, "kind", "", true);
  ScalarLaw law;
  if (kind == "constant") {
    law.kind = ScalarLawKind::Constant;
    law.kappa0 = get_number(obj, path, "kappa0", 1.0);
    if (obj.contains("rho")) bad(path + ".rho", "only valid for kind 'power'");
  } else if (kind == "power") {
    law.kind = ScalarLawKind::Power;
    law.kappa0 = get_number(obj, path, "kappa0", 1.0);
    law.rho = get_number(obj, path, "rho", 0.0, true);
  } else if (kind == "entropic") {
    law.kind = ScalarLawKind::Entropic;
    if (obj.contains("kappa0")) bad(path + ".kappa0", "only valid for kinds 'constant'/'power'");
    if (obj.contains("rho")) bad(path + ".rho", "only valid for kind 'power'");
  } else {
    bad(path + ".kind", "unknown scalar law kind '" + kind + "'");
  }
  if (law.kappa0 <= 0.0) bad(path + ".kappa0", "must be positive");
  return law;
}

TransmissionLaw parse_transmission_law(const json& obj, const std::string& path) {
  if (!obj.is_object()) bad(path, "expected an object");
  check_keys(obj, path, {"kind", "value", "M0"});
  const std::string kind = get_string(obj, path, "kind", "", true);
  TransmissionLaw law;
  if (kind == "constant") {
    law.kind = TransmissionKind::Constant;
    law.value = get_number(obj, path, "value", 0.0, true);
    if (law.value < 0.0) bad(path + ".value", "must be nonnegative");
    if (obj.contains("M0")) bad(path + ".M0", "only valid for kind 'entropic_pair'");
  } else if (kind == "entropic_pair") {
    law.kind = TransmissionKind::EntropicPair;
    law.M0 = get_number(obj, path, "M0", 1.0);
    if (law.M0 <= 0.0) bad(path + ".M0", "must be positive");
    if (obj.contains("value")) bad(path + ".value", "only valid for kind 'constant'");
  } else if (kind == "zero") {
    law.kind = TransmissionKind::Zero;
    if (obj.contains("value")) bad(path + ".value", "only valid for kind 'constant'");
    if (obj.contains("M0")) bad(path + ".M0", "only valid for kind 'entropic_pair'");
  } else {
    bad(path + ".kind", "unknown transmission law kind '" + kind + "'");
  }
  return law;
}

ForcingLaw parse_forcing_law(const json& obj, const std::string& path) {
  if (!obj.is_object()) bad(path, "expected an object");
  check_keys(obj, path, {"kind", "value", "coeffs"});
  const std::string kind = get_string(obj, path, "kind", "", true);
  ForcingLaw law;
  if (kind == "zero") {
    law.kind = ForcingKind::Zero;
  } else if (kind == "constant") {
    law.kind = ForcingKind::Constant;
    law.value = get_number(obj, path, "value", 0.0, true);
  } else if (kind == "allen_cahn") {
    law.kind = ForcingKind::AllenCahn;
  } else if (kind == "polynomial") {
    law.kind = ForcingKind::Polynomial;
    if (!obj.contains("coeffs") || !obj["coeffs"].is_array())
      bad(path + ".coeffs", "expected an array of numbers");
    for (const auto& c : obj["coeffs"]) {
      if (!c.is_number()) bad(path + ".coeffs", "expected an array of numbers");
      law.coeffs.push_back(c.get<double>());
    }
  } else {
    bad(path + ".kind", "unknown forcing law kind '" + kind + "'");
  }
  if (kind != "constant" && obj.contains("value"))
    bad(path + ".value", "only valid for kind 'constant'");
  if (kind != "polynomial" && obj.contains("coeffs"))
    bad(path + ".coeffs", "only valid for kind 'polynomial'");
  return law;
}

ClampSpec parse_clamp(const json& obj, const std::string& path) {
  ClampSpec spec;
  if (obj.is_string()) {
    if (obj.get<std::string>() != "auto") bad(path, "expected \"auto\" or {l, L}");
    return spec;
  }
  if (!obj.is_object()) bad(path, "expected \"auto\" or {l, L}");
  check_keys(obj, path, {"l", "L"});
  spec.automatic = false;
  spec.l = get_number(obj, path, "l", 0.0, true);
  spec.L = get_number(obj, path, "L", 0.0, true);
  if (!(spec.l < spec.L)) bad(path, "requires l < L");
  return spec;
}

}  // namespace

bool RunConfig::uses_entropic_laws() const {
  if (onsager) return true;  // temperatures must stay positive
  if (!model) return false;
  for (const ScalarLaw* k : {&model->k_plus, &model->k_minus, &model->k_gamma})
    if (k->kind == ScalarLawKind::Entropic) return true;
  for (const TransmissionLaw* m : {&model->m_plus, &model->m_minus, &model->m_gamma})
    if (m->kind == TransmissionKind::EntropicPair) return true;
  return false;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // recover line/column from the byte offset
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config: parse error at line " + std::to_string(line) +
                      ", column " + std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(doc, "config",
             {"geometry", "model", "onsager", "forcing", "initial", "time", "output"});

  RunConfig cfg;

  if (!doc.contains("geometry")) throw ConfigError("config: geometry: missing required key");
  {
    const json& g = doc["geometry"];
    if (!g.is_object()) bad("geometry", "expected an object");
    check_keys(g, "geometry", {"nx", "ny", "mode"});
    cfg.nx = get_int(g, "geometry", "nx", 0, true);
    cfg.ny = get_int(g, "geometry", "ny", 0, true);
    if (cfg.nx < 1 || cfg.ny < 1) bad("geometry", "nx and ny must be >= 1");
    cfg.mode = geometry_mode_from_string(get_string(g, "geometry", "mode", "full"));
  }

  const bool has_model = doc.contains("model");
  const bool has_onsager = doc.contains("onsager");
  if (has_model == has_onsager)
    throw ConfigError("config: exactly one of 'model' and 'onsager' must be given");

  if (has_model) {
    const json& m = doc["model"];
    if (!m.is_object()) bad("model", "expected an object");
    check_keys(m, "model",
               {"k_plus", "k_minus", "k_gamma", "m_plus", "m_minus", "m_gamma", "clamp"});
    CoefficientModel model;
    model.k_plus = m.contains("k_plus") ? parse_scalar_law(m["k_plus"], "model.k_plus")
                                        : ScalarLaw{};
    model.k_minus = m.contains("k_minus") ? parse_scalar_law(m["k_minus"], "model.k_minus")
                                          : ScalarLaw{};
    model.k_gamma = m.contains("k_gamma") ? parse_scalar_law(m["k_gamma"], "model.k_gamma")
                                          : ScalarLaw{};
    const TransmissionLaw unit{TransmissionKind::Constant, 1.0, 1.0};
    model.m_plus = m.contains("m_plus")
                       ? parse_transmission_law(m["m_plus"], "model.m_plus") : unit;
    model.m_minus = m.contains("m_minus")
                        ? parse_transmission_law(m["m_minus"], "model.m_minus") : unit;
    model.m_gamma = m.contains("m_gamma")
                        ? parse_transmission_law(m["m_gamma"], "model.m_gamma") : unit;
    if (m.contains("clamp")) cfg.clamp = parse_clamp(m["clamp"], "model.clamp");
    cfg.model = std::move(model);
  } else {
    const json& o = doc["onsager"];
    if (!o.is_object()) bad("onsager", "expected an object");
    check_keys(o, "onsager",
               {"c_plus", "c_minus", "c_gamma", "K_plus", "K_minus", "K_gamma", "M_plus",
                "M_minus", "M_gamma", "clamp"});
    OnsagerModel om;
    om.c_plus = get_number(o, "onsager", "c_plus", 1.0);
    om.c_minus = get_number(o, "onsager", "c_minus", 1.0);
    om.c_gamma = get_number(o, "onsager", "c_gamma", 1.0);
    if (om.c_plus <= 0.0 || om.c_minus <= 0.0 || om.c_gamma <= 0.0)
      bad("onsager", "specific heats must be positive");
    const ScalarLaw unitK{ScalarLawKind::Constant, 1.0, 1.0};
    om.K_plus = o.contains("K_plus") ? parse_scalar_law(o["K_plus"], "onsager.K_plus") : unitK;
    om.K_minus = o.contains("K_minus") ? parse_scalar_law(o["K_minus"], "onsager.K_minus") : unitK;
    om.K_gamma = o.contains("K_gamma") ? parse_scalar_law(o["K_gamma"], "onsager.K_gamma") : unitK;
    const TransmissionLaw unitM{TransmissionKind::Constant, 1.0, 1.0};
    om.M_plus = o.contains("M_plus")
                    ? parse_transmission_law(o["M_plus"], "onsager.M_plus") : unitM;
    om.M_minus = o.contains("M_minus")
                     ? parse_transmission_law(o["M_minus"], "onsager.M_minus") : unitM;
    om.M_gamma = o.contains("M_gamma")
                     ? parse_transmission_law(o["M_gamma"], "onsager.M_gamma") : unitM;
    if (o.contains("clamp")) cfg.clamp = parse_clamp(o["clamp"], "onsager.clamp");
    cfg.onsager = std::move(om);
  }

  // transmission across absent fields is forced to zero
  if (cfg.mode != GeometryMode::Full) {
    auto force_zero = [](TransmissionLaw& law) { law = TransmissionLaw{}; };
    if (cfg.model) {
      if (cfg.mode == GeometryMode::UpperOnly) {
        force_zero(cfg.model->m_minus);
        force_zero(cfg.model->m_gamma);
      } else {
        force_zero(cfg.model->m_plus);
        force_zero(cfg.model->m_minus);
        force_zero(cfg.model->m_gamma);
      }
    }
    if (cfg.onsager) {
      if (cfg.mode == GeometryMode::UpperOnly) {
        force_zero(cfg.onsager->M_minus);
        force_zero(cfg.onsager->M_gamma);
      } else {
        force_zero(cfg.onsager->M_plus);
        force_zero(cfg.onsager->M_minus);
        force_zero(cfg.onsager->M_gamma);
      }
    }
  }

  if (doc.contains("forcing")) {
    const json& f = doc["forcing"];
    if (!f.is_object()) bad("forcing", "expected an object");
    check_keys(f, "forcing",
               {"f_plus", "f_minus", "f_gamma", "g_plus", "g_minus", "h_plus", "h_minus",
                "h_gamma"});
    auto law = [&](const char* key, ForcingLaw& out) {
      if (f.contains(key)) out = parse_forcing_law(f[key], std::string("forcing.") + key);
    };
    law("f_plus", cfg.forcing.f_plus);
    law("f_minus", cfg.forcing.f_minus);
    law("f_gamma", cfg.forcing.f_gamma);
    law("g_plus", cfg.forcing.g_plus);
    law("g_minus", cfg.forcing.g_minus);
    law("h_plus", cfg.forcing.h_plus);
    law("h_minus", cfg.forcing.h_minus);
    law("h_gamma", cfg.forcing.h_gamma);
  }

  if (!doc.contains("initial")) throw ConfigError("config: initial: missing required key");
  {
    const json& ini = doc["initial"];
    if (!ini.is_object()) bad("initial", "expected an object");
    check_keys(ini, "initial",
               {"kind", "value", "value_plus", "value_minus", "value_gamma", "expression"});
    const std::string kind = get_string(ini, "initial", "kind", "", true);
    if (kind == "constant") {
      cfg.initial.kind = InitialSpec::Kind::Constant;
      cfg.initial.value = get_number(ini, "initial", "value", 0.0, true);
    } else if (kind == "piecewise") {
      cfg.initial.kind = InitialSpec::Kind::Piecewise;
      cfg.initial.value_plus = get_number(ini, "initial", "value_plus", 0.0, true);
      if (cfg.mode == GeometryMode::Full)
        cfg.initial.value_minus = get_number(ini, "initial", "value_minus", 0.0, true);
      else if (ini.contains("value_minus"))
        bad("initial.value_minus", "no lower bulk in this mode");
      if (cfg.mode != GeometryMode::BulkOnly)
        cfg.initial.value_gamma = get_number(ini, "initial", "value_gamma", 0.0, true);
      else if (ini.contains("value_gamma"))
        bad("initial.value_gamma", "no interface in this mode");
    } else if (kind == "expression") {
      cfg.initial.kind = InitialSpec::Kind::Expression;
      const std::string expr = get_string(ini, "initial", "expression", "", true);
      cfg.initial.expression = Expression::parse(expr);
    } else {
      bad("initial.kind", "unknown initial kind '" + kind + "'");
    }
  }

  if (doc.contains("time")) {
    const json& t = doc["time"];
    if (!t.is_object()) bad("time", "expected an object");
    check_keys(t, "time", {"dt", "t_end", "picard_tol", "picard_max", "linear_tol", "dt_min"});
    cfg.time.dt = get_number(t, "time", "dt", cfg.time.dt);
    cfg.time.t_end = get_number(t, "time", "t_end", cfg.time.t_end);
    cfg.time.picard_tol = get_number(t, "time", "picard_tol", cfg.time.picard_tol);
    cfg.time.picard_max = get_int(t, "time", "picard_max", cfg.time.picard_max);
    cfg.time.linear_tol = get_number(t, "time", "linear_tol", cfg.time.linear_tol);
    cfg.time.dt_min = get_number(t, "time", "dt_min", cfg.time.dt_min);
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (!o.is_object()) bad("output", "expected an object");
    check_keys(o, "output", {"dir", "prefix", "snapshot_every"});
    cfg.output.dir = get_string(o, "output", "dir", cfg.output.dir);
    cfg.output.prefix = get_string(o, "output", "prefix", cfg.output.prefix);
    cfg.output.snapshot_every = get_int(o, "output", "snapshot_every", cfg.output.snapshot_every);
    if (cfg.output.snapshot_every < 1) bad("output.snapshot_every", "must be >= 1");
  }
  cfg.time.snapshot_every = cfg.output.snapshot_every;
  cfg.time.validate();
  return cfg;
}

ClampBounds resolve_clamp(const RunConfig& cfg, double u0_min, double u0_max) {
  if (!cfg.clamp.automatic) return {cfg.clamp.l, cfg.clamp.L};
  if (cfg.uses_entropic_laws()) {
    if (!(u0_min > 0.0))
      throw ConfigError(
          "config: clamp 'auto' with entropic laws requires positive initial data");
    return {0.5 * u0_min, u0_max + 1.0};
  }
  if (u0_min < 0.0) return {u0_min - 1.0, u0_max + 1.0};
  return {u0_min, u0_max + 1.0};
}

namespace {

json scalar_law_json(const ScalarLaw& law) {
  json j;
  switch (law.kind) {
    case ScalarLawKind::Constant:
      j["kind"] = "constant";
      j["kappa0"] = law.kappa0;
      break;
    case ScalarLawKind::Power:
      j["kind"] = "power";
      j["kappa0"] = law.kappa0;
      j["rho"] = law.rho;
      break;
    case ScalarLawKind::Entropic:
      j["kind"] = "entropic";
      break;
  }
  return j;
}

json transmission_law_json(const TransmissionLaw& law) {
  json j;
  switch (law.kind) {
    case TransmissionKind::Constant:
      j["kind"] = "constant";
      j["value"] = law.value;
      break;
    case TransmissionKind::EntropicPair:
      j["kind"] = "entropic_pair";
      j["M0"] = law.M0;
      break;
    case TransmissionKind::Zero:
      j["kind"] = "zero";
      break;
  }
  return j;
}

json forcing_law_json(const ForcingLaw& law) {
  json j;
  switch (law.kind) {
    case ForcingKind::Zero:
      j["kind"] = "zero";
      break;
    case ForcingKind::Constant:
      j["kind"] = "constant";
      j["value"] = law.value;
      break;
    case ForcingKind::AllenCahn:
      j["kind"] = "allen_cahn";
      break;
    case ForcingKind::Polynomial:
      j["kind"] = "polynomial";
      j["coeffs"] = law.coeffs;
      break;
  }
  return j;
}

json clamp_json(const ClampSpec& spec) {
  if (spec.automatic) return json("auto");
  json j;
  j["l"] = spec.l;
  j["L"] = spec.L;
  return j;
}

}  // namespace

std::string write_config(const RunConfig& cfg) {
  json doc;
  doc["geometry"]["nx"] = cfg.nx;
  doc["geometry"]["ny"] = cfg.ny;
  doc["geometry"]["mode"] = to_string(cfg.mode);

  if (cfg.model) {
    json m;
    m["k_plus"] = scalar_law_json(cfg.model->k_plus);
    m["k_minus"] = scalar_law_json(cfg.model->k_minus);
    m["k_gamma"] = scalar_law_json(cfg.model->k_gamma);
    m["m_plus"] = transmission_law_json(cfg.model->m_plus);
    m["m_minus"] = transmission_law_json(cfg.model->m_minus);
    m["m_gamma"] = transmission_law_json(cfg.model->m_gamma);
    m["clamp"] = clamp_json(cfg.clamp);
    doc["model"] = std::move(m);
  } else if (cfg.onsager) {
    json o;
    o["c_plus"] = cfg.onsager->c_plus;
    o["c_minus"] = cfg.onsager->c_minus;
    o["c_gamma"] = cfg.onsager->c_gamma;
    o["K_plus"] = scalar_law_json(cfg.onsager->K_plus);
    o["K_minus"] = scalar_law_json(cfg.onsager->K_minus);
    o["K_gamma"] = scalar_law_json(cfg.onsager->K_gamma);
    o["M_plus"] = transmission_law_json(cfg.onsager->M_plus);
    o["M_minus"] = transmission_law_json(cfg.onsager->M_minus);
    o["M_gamma"] = transmission_law_json(cfg.onsager->M_gamma);
    o["clamp"] = clamp_json(cfg.clamp);
    doc["onsager"] = std::move(o);
  }

  json f;
  f["f_plus"] = forcing_law_json(cfg.forcing.f_plus);
  f["f_minus"] = forcing_law_json(cfg.forcing.f_minus);
  f["f_gamma"] = forcing_law_json(cfg.forcing.f_gamma);
  f["g_plus"] = forcing_law_json(cfg.forcing.g_plus);
  f["g_minus"] = forcing_law_json(cfg.forcing.g_minus);
  f["h_plus"] = forcing_law_json(cfg.forcing.h_plus);
  f["h_minus"] = forcing_law_json(cfg.forcing.h_minus);
  f["h_gamma"] = forcing_law_json(cfg.forcing.h_gamma);
  doc["forcing"] = std::move(f);

  json ini;
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::Constant:
      ini["kind"] = "constant";
      ini["value"] = cfg.initial.value;
      break;
    case InitialSpec::Kind::Piecewise:
      ini["kind"] = "piecewise";
      ini["value_plus"] = cfg.initial.value_plus;
      if (cfg.mode == GeometryMode::Full) ini["value_minus"] = cfg.initial.value_minus;
      if (cfg.mode != GeometryMode::BulkOnly) ini["value_gamma"] = cfg.initial.value_gamma;
      break;
    case InitialSpec::Kind::Expression:
      ini["kind"] = "expression";
      ini["expression"] = cfg.initial.expression.text();
      break;
  }
  doc["initial"] = std::move(ini);

  json t;
  t["dt"] = cfg.time.dt;
  t["t_end"] = cfg.time.t_end;
  t["picard_tol"] = cfg.time.picard_tol;
  t["picard_max"] = cfg.time.picard_max;
  t["linear_tol"] = cfg.time.linear_tol;
  t["dt_min"] = cfg.time.resolved_dt_min();
  doc["time"] = std::move(t);

  json o;
  o["dir"] = cfg.output.dir;
  o["prefix"] = cfg.output.prefix;
  o["snapshot_every"] = cfg.output.snapshot_every;
  doc["output"] = std::move(o);

  return doc.dump(2) + "\n";
}

}  // namespace bulkface
