#include "spincluster/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "spincluster/dynamics.hpp"
#include "spincluster/errors.hpp"
#include "spincluster/observables.hpp"
#include "spincluster/spectra.hpp"
#include "spincluster/symmetry.hpp"
#include "spincluster/yangian.hpp"

namespace spincluster::cli {

using nlohmann::json;

namespace {

// Thresholds for the checks that turn into exit code 3.
constexpr double kAxiomTolerance = 1e-12;
constexpr double kLevelCheckTolerance = 1e-10;
constexpr double kMagnetizationSlack = 1e-12;
constexpr double kTrajectoryPopulationTolerance = 1e-7;

constexpr double kTwoPi = 2 * std::numbers::pi;

// Raised when a computed report fails an asserted invariant.
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config

json default_config() {
  return {
      {"sites", 4},
      {"weights", nullptr},
      {"cluster", {{"kind", "parallelogram"}, {"a12", 1.0}, {"a13", -3.0}}},
      {"moments", {{"g", 2.0}, {"m", nullptr}}},
      {"phase_map", {{"a12", {0.1, 2.0}}, {"a13", {-5.0, -0.1}}, {"n_grid", 100}}},
      {"levels_report", {{"B", {-5.0, 5.0}}, {"points", 50}}},
      {"rates", {{"A", 1.0}, {"inv_temp", 1.0}, {"gamma", 1.0}, {"delta_gap", 0.1}}},
      {"field",
       {{"kind", "sinusoid"}, {"amplitude", 10.0}, {"angular_rate", 1.0}, {"t_start", 0.0}, {"t_end", kTwoPi}}},
      {"initial", {{"kind", "equilibrium"}, {"n0", 0.0}, {"rho00", 0.0}}},
      {"simulation", {{"steps", 100000}, {"lzs_mode", "off"}, {"mode", "derived"}}},
  };
}

json cluster_defaults(const std::string& kind) {
  if (kind == "triangle") return {{"kind", "triangle"}, {"j12", 65.0}, {"j13", 7.0}};
  if (kind == "parallelogram") return {{"kind", "parallelogram"}, {"a12", 1.0}, {"a13", -3.0}};
  throw DomainError("config: cluster.kind must be 'triangle' or 'parallelogram', got '" + kind + "'");
}

std::string type_name(const json& v) {
  if (v.is_number()) return "number";
  return v.type_name();
}

// A user value may replace a default of the same JSON kind; null defaults
// accept numbers and arrays.
void check_value(const std::string& path, const json& def, const json& val) {
  auto fail = [&] {
    throw DomainError("config: '" + path + "' has type " + type_name(val) + ", expected " + type_name(def));
  };
  if (def.is_null()) {
    if (!(val.is_null() || val.is_number() || val.is_array())) fail();
    return;
  }
  if (def.is_number_integer()) {
    if (!val.is_number_integer()) {
      if (!val.is_number_float() || std::floor(val.get<double>()) != val.get<double>()) fail();
    }
    return;
  }
  if (def.is_number()) {
    if (!val.is_number()) fail();
    return;
  }
  if (def.is_string() && !val.is_string()) fail();
  if (def.is_array()) {
    if (!val.is_array() || val.size() != def.size()) {
      throw DomainError("config: '" + path + "' must be an array of " + std::to_string(def.size()) + " numbers");
    }
    for (const json& x : val)
      if (!x.is_number()) throw DomainError("config: '" + path + "' must contain numbers");
  }
}

json merge_section(const std::string& name, const json& def, const json* user) {
  json out = def;
  if (user == nullptr || user->is_null()) return out;
  if (!user->is_object()) throw DomainError("config: section '" + name + "' must be an object");
  for (auto it = user->begin(); it != user->end(); ++it) {
    if (!def.contains(it.key())) {
      throw DomainError("config: unknown key '" + name + "." + it.key() + "'");
    }
    check_value(name + "." + it.key(), def.at(it.key()), it.value());
    out[it.key()] = it.value();
  }
  return out;
}

double num(const json& section, const char* key) { return section.at(key).get<double>(); }

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Schemas

json schema_number() { return {{"type", "number"}}; }
json schema_integer() { return {{"type", "integer"}}; }
json schema_bool() { return {{"type", "boolean"}}; }
json schema_string() { return {{"type", "string"}}; }
json schema_array(json items) { return {{"type", "array"}, {"items", std::move(items)}}; }

json schema_object(json properties, std::vector<std::string> required = {}) {
  if (required.empty())
    for (auto it = properties.begin(); it != properties.end(); ++it) required.push_back(it.key());
  return {{"type", "object"}, {"properties", std::move(properties)}, {"required", required},
          {"additionalProperties", false}};
}

json schema_coupling_map() {
  return {{"type", "object"}, {"additionalProperties", schema_number()}};
}

json schema_cluster() {
  return {{"type", "object"},
          {"properties",
           {{"kind", {{"type", "string"}, {"enum", {"triangle", "parallelogram"}}}},
            {"j12", schema_number()},
            {"j13", schema_number()},
            {"a12", schema_number()},
            {"a13", schema_number()}}},
          {"required", {"kind"}},
          {"additionalProperties", false}};
}

json schema_ground() {
  return schema_object({{"labels", {{"type", "array"}, {"items", schema_string()}, {"minItems", 1}}},
                        {"S", {{"type", {"number", "string"}}}},
                        {"energy", schema_number()}});
}

json header(const std::string& sub) {
  return {{"type", "string"}, {"enum", {sub}}};
}

}  // namespace

json output_schema(const std::string& sub) {
  json props;
  if (sub == "q-spectrum") {
    props = {{"subcommand", header(sub)},
             {"sites", schema_integer()},
             {"weights", schema_array(schema_number())},
             {"levels", schema_array(schema_object({{"q", schema_number()}, {"multiplicity", schema_integer()}}))},
             {"states", schema_array(schema_object({{"S", schema_number()},
                                                    {"m", schema_number()},
                                                    {"q", schema_number()},
                                                    {"degenerate", schema_bool()}}))}};
  } else if (sub == "check-yangian") {
    props = {{"subcommand", header(sub)},
             {"sites", schema_integer()},
             {"weights", schema_array(schema_number())},
             {"level_zero_residual", schema_number()},
             {"serre_residual", schema_number()},
             {"fitted_lambda", {{"type", {"number", "null"}}}},
             {"lambda_identifiable", schema_bool()},
             {"serre_consistent", schema_bool()},
             {"triple_coefficients", {{"type", {"array", "null"}}, {"items", schema_number()}}},
             {"q_hermitian", {{"type", {"boolean", "null"}}}}};
  } else if (sub == "commutant") {
    props = {{"subcommand", header(sub)},
             {"sites", schema_integer()},
             {"weights", schema_array(schema_number())},
             {"dimension", schema_integer()},
             {"basis", schema_array(schema_coupling_map())},
             {"singular_values", schema_array(schema_number())},
             {"max_commutator_residual", schema_number()},
             {"reference_member",
              {{"type", {"object", "null"}},
               {"properties", {{"couplings", schema_coupling_map()}, {"distance", schema_number()}}},
               {"required", {"couplings", "distance"}},
               {"additionalProperties", false}}}};
  } else if (sub == "spectrum") {
    props = {{"subcommand", header(sub)},
             {"cluster", schema_cluster()},
             {"levels", schema_array(schema_object({{"label", schema_string()},
                                                    {"S", schema_number()},
                                                    {"energy", schema_number()},
                                                    {"multiplicity", schema_integer()}}))},
             {"total_multiplicity", schema_integer()},
             {"weighted_sum", schema_number()},
             {"numeric_discrepancy", schema_number()},
             {"ground", schema_ground()},
             {"ordering",
              {{"type", {"object", "null"}},
               {"properties",
                {{"chain", schema_array(schema_string())},
                 {"link_holds", schema_array(schema_bool())},
                 {"all_hold", schema_bool()},
                 {"ground_is_first", schema_bool()}}},
               {"required", {"chain", "link_holds", "all_hold", "ground_is_first"}},
               {"additionalProperties", false}}}};
  } else if (sub == "moments") {
    props = {{"subcommand", header(sub)},
             {"cluster", schema_cluster()},
             {"g", schema_number()},
             {"S", schema_number()},
             {"m", schema_number()},
             {"energy", schema_number()},
             {"sector_gap", {{"type", {"number", "null"}}}},
             {"mu", schema_array(schema_number())},
             {"mu_raw", schema_array(schema_number())},
             {"sum", schema_number()},
             {"sum_rule_residual", schema_number()}};
  } else {
    throw DomainError("output_schema: no JSON schema for '" + sub + "'");
  }
  json s = schema_object(std::move(props));
  s["$schema"] = "http://json-schema.org/draft-07/schema#";
  return s;
}

namespace {

bool matches_type(const json& v, const std::string& t) {
  if (t == "number") return v.is_number();
  if (t == "integer") return v.is_number_integer();
  if (t == "boolean") return v.is_boolean();
  if (t == "string") return v.is_string();
  if (t == "array") return v.is_array();
  if (t == "object") return v.is_object();
  if (t == "null") return v.is_null();
  return false;
}

std::string validate_at(const json& v, const json& s, const std::string& path) {
  if (s.contains("type")) {
    const json& t = s.at("type");
    bool ok = false;
    if (t.is_string()) {
      ok = matches_type(v, t.get<std::string>());
    } else {
      for (const json& alt : t) ok = ok || matches_type(v, alt.get<std::string>());
    }
    if (!ok) return path + ": type " + type_name(v) + " not allowed by " + t.dump();
  }
  if (s.contains("enum")) {
    const json& e = s.at("enum");
    if (std::find(e.begin(), e.end(), v) == e.end()) return path + ": value " + v.dump() + " not in enum";
  }
  if (v.is_object()) {
    if (s.contains("required"))
      for (const json& key : s.at("required"))
        if (!v.contains(key.get<std::string>())) return path + ": missing '" + key.get<std::string>() + "'";
    const json props = s.value("properties", json::object());
    for (auto it = v.begin(); it != v.end(); ++it) {
      const std::string sub = path + "." + it.key();
      if (props.contains(it.key())) {
        if (auto e = validate_at(it.value(), props.at(it.key()), sub); !e.empty()) return e;
      } else if (s.contains("additionalProperties")) {
        const json& ap = s.at("additionalProperties");
        if (ap.is_boolean()) {
          if (!ap.get<bool>()) return sub + ": additional property not allowed";
        } else if (auto e = validate_at(it.value(), ap, sub); !e.empty()) {
          return e;
        }
      }
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s.at("minItems").get<std::size_t>()) {
      return path + ": fewer than " + s.at("minItems").dump() + " items";
    }
    if (s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i)
        if (auto e = validate_at(v[i], s.at("items"), path + "[" + std::to_string(i) + "]"); !e.empty()) return e;
    }
  }
  return {};
}

}  // namespace

std::string validate_against_schema(const json& doc, const json& schema) {
  return validate_at(doc, schema, "$");
}

std::vector<std::string> subcommands() {
  return {"q-spectrum", "check-yangian", "commutant", "spectrum", "phase-map", "moments", "levels-report", "simulate"};
}

std::vector<std::string> presets() { return {"v6-triangle", "v8-ground", "fig4-loop", "fig5-lzs"}; }

json preset_config(const std::string& name) {
  if (name == "v6-triangle") return {{"sites", 3}, {"cluster", {{"kind", "triangle"}, {"j12", 65.0}, {"j13", 7.0}}}};
  if (name == "v8-ground") {
    return {{"sites", 4}, {"cluster", {{"kind", "parallelogram"}, {"a12", 1.0}, {"a13", -3.0}}}};
  }
  if (name == "fig4-loop") {
    return {{"field",
             {{"kind", "sinusoid"}, {"amplitude", 10.0}, {"angular_rate", 1.0}, {"t_start", 0.0}, {"t_end", kTwoPi}}},
            {"simulation", {{"lzs_mode", "off"}}}};
  }
  if (name == "fig5-lzs") {
    return {{"field",
             {{"kind", "sinusoid"},
              {"amplitude", 10.0},
              {"angular_rate", 1.0},
              {"t_start", 0.0},
              {"t_end", std::numbers::pi}}},
            {"simulation", {{"lzs_mode", "adiabatic"}}}};
  }
  throw DomainError("unknown preset '" + name + "'");
}

json normalize_config(const json& user) {
  if (!user.is_object()) throw DomainError("config: top level must be a JSON object");
  const json def = default_config();
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (!def.contains(it.key())) throw DomainError("config: unknown key '" + it.key() + "'");
  }
  json out = def;

  if (user.contains("sites")) {
    check_value("sites", def.at("sites"), user.at("sites"));
    out["sites"] = user.at("sites").get<int>();
  }
  const int n = out.at("sites").get<int>();
  if (n < 2 || n > SpinRegister::kMaxSites) {
    throw DomainError("config: sites must be between 2 and " + std::to_string(SpinRegister::kMaxSites));
  }
  if (user.contains("weights") && !user.at("weights").is_null()) {
    const json& w = user.at("weights");
    if (!w.is_array()) throw DomainError("config: 'weights' must be an array of numbers");
    for (const json& x : w)
      if (!x.is_number()) throw DomainError("config: 'weights' must be an array of numbers");
    if (static_cast<int>(w.size()) != n) {
      throw DomainError("config: 'weights' has " + std::to_string(w.size()) + " entries for " + std::to_string(n) +
                        " sites");
    }
    out["weights"] = w;
  } else {
    out["weights"] = std::vector<double>(static_cast<std::size_t>(n), 0.0);
  }

  const json* uc = user.contains("cluster") ? &user.at("cluster") : nullptr;
  std::string kind = "parallelogram";
  if (uc && uc->is_object() && uc->contains("kind")) {
    if (!uc->at("kind").is_string()) throw DomainError("config: 'cluster.kind' must be a string");
    kind = uc->at("kind").get<std::string>();
  }
  out["cluster"] = merge_section("cluster", cluster_defaults(kind), uc);

  for (const char* name : {"moments", "phase_map", "levels_report", "rates", "field", "initial", "simulation"}) {
    out[name] = merge_section(name, def.at(name), user.contains(name) ? &user.at(name) : nullptr);
  }

  // Enumerations and ranges the owning modules do not see directly.
  const std::string init_kind = out["initial"]["kind"];
  if (init_kind != "equilibrium" && init_kind != "polarized_up" && init_kind != "explicit") {
    throw DomainError("config: initial.kind must be equilibrium, polarized_up or explicit");
  }
  field_kind_from_string(out["field"]["kind"]);
  lzs_mode_from_string(out["simulation"]["lzs_mode"]);
  coefficient_mode_from_string(out["simulation"]["mode"]);
  if (out["levels_report"]["points"].get<int>() < 1) throw DomainError("config: levels_report.points must be >= 1");
  const json& m = out["moments"]["m"];
  if (!m.is_null() && !m.is_number()) throw DomainError("config: moments.m must be a number");
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Subcommands

YangianWeights weights_of(const json& cfg) { return {cfg.at("weights").get<std::vector<double>>()}; }

json couplings_json(const CouplingSet& c) {
  json j = json::object();
  for (std::size_t p = 0; p < c.size(); ++p) j[c.pair_name(p)] = c.values()[p];
  return j;
}

struct Cluster {
  SpinRegister reg;
  CouplingSet couplings;
  LevelSet levels;
};

Cluster cluster_of(const json& cfg) {
  const json& c = cfg.at("cluster");
  if (c.at("kind") == "triangle") {
    const double j12 = num(c, "j12"), j13 = num(c, "j13");
    return {SpinRegister(3), constrained_couplings_triangle(j12, j13), triangle_levels(j12, j13)};
  }
  const double a12 = num(c, "a12"), a13 = num(c, "a13");
  return {SpinRegister(4), parallelogram_couplings(a12, a13), parallelogram_levels(a12, a13)};
}

double level_scale(const LevelSet& set) {
  double s = 1.0;
  for (const Level& l : set.levels) s = std::max(s, std::abs(l.energy));
  return s;
}

json cmd_q_spectrum(const json& cfg) {
  const SpinRegister reg(cfg.at("sites").get<int>());
  const YangianWeights w = weights_of(cfg);
  const Spectrum spec = hermitian_eig(build_q(reg, w));
  json levels = json::array();
  for (const auto& group : spec.degeneracy_groups) {
    double mean = 0.0;
    for (int i : group) mean += spec.eigenvalues(i);
    levels.push_back({{"q", mean / static_cast<double>(group.size())},
                      {"multiplicity", static_cast<int>(group.size())}});
  }
  json states = json::array();
  for (const LabeledState& s : q_joint_labels(reg, w).states) {
    states.push_back({{"S", s.S}, {"m", s.m}, {"q", s.q}, {"degenerate", s.degenerate}});
  }
  return {{"subcommand", "q-spectrum"}, {"sites", reg.n_sites()}, {"weights", w.u},
          {"levels", levels},           {"states", states}};
}

json cmd_check_yangian(const json& cfg) {
  const SpinRegister reg(cfg.at("sites").get<int>());
  const YangianWeights w = weights_of(cfg);
  const AxiomReport r = check_yangian_axioms(reg, w);
  json out = {{"subcommand", "check-yangian"},
              {"sites", reg.n_sites()},
              {"weights", w.u},
              {"level_zero_residual", r.level_zero_residual},
              {"serre_residual", r.serre_residual},
              {"fitted_lambda", r.lambda_identifiable ? json(r.fitted_lambda) : json(nullptr)},
              {"lambda_identifiable", r.lambda_identifiable},
              {"serre_consistent", r.serre_consistent},
              {"triple_coefficients", nullptr},
              {"q_hermitian", nullptr}};
  if (reg.n_sites() == 3 || reg.n_sites() == 4) {
    out["triple_coefficients"] = q_triple_coefficients(w, reg.n_sites());
    out["q_hermitian"] = q_hermiticity_condition(w, reg.n_sites());
  }
  if (r.level_zero_residual > kAxiomTolerance) {
    throw CheckFailed("check-yangian: level-zero residual " + format_double(r.level_zero_residual) +
                      " exceeds tolerance");
  }
  return out;
}

json cmd_commutant(const json& cfg) {
  const SpinRegister reg(cfg.at("sites").get<int>());
  const YangianWeights w = weights_of(cfg);
  const CouplingFamily fam = commutant_family(reg, build_q(reg, w));
  json basis = json::array();
  for (const CouplingSet& b : fam.basis) basis.push_back(couplings_json(b));

  json reference = nullptr;
  double ref_distance = 0.0;
  const bool zero_weights = std::all_of(w.u.begin(), w.u.end(), [](double x) { return x == 0.0; });
  if (zero_weights && (reg.n_sites() == 3 || reg.n_sites() == 4)) {
    // A fixed member of the closed-form family, normalized for the distance test.
    CouplingSet member = reg.n_sites() == 3 ? constrained_couplings_triangle(1.0, 0.5)
                                            : constrained_couplings_parallelogram(1.0, 2.0, -0.5);
    Eigen::Map<const Eigen::VectorXd> v(member.values().data(), static_cast<Eigen::Index>(member.size()));
    const Eigen::VectorXd unit = v / v.norm();
    const CouplingSet normalized(reg.n_sites(), std::vector<double>(unit.data(), unit.data() + unit.size()));
    ref_distance = distance_from_family(fam, normalized);
    reference = {{"couplings", couplings_json(member)}, {"distance", ref_distance}};
  }

  json out = {{"subcommand", "commutant"},
              {"sites", reg.n_sites()},
              {"weights", w.u},
              {"dimension", fam.dimension},
              {"basis", basis},
              {"singular_values", fam.singular_values},
              {"max_commutator_residual", fam.max_commutator_residual},
              {"reference_member", reference}};
  if (fam.max_commutator_residual > kCommutantMembershipTolerance) {
    throw CheckFailed("commutant: basis commutator residual " + format_double(fam.max_commutator_residual));
  }
  if (ref_distance > kCommutantMembershipTolerance) {
    throw CheckFailed("commutant: reference member lies outside the family (distance " + format_double(ref_distance) +
                      ")");
  }
  return out;
}

json ground_json(const GroundLevels& g) {
  return {{"labels", g.labels}, {"S", g.S ? json(*g.S) : json("degenerate-mixed")}, {"energy", g.energy}};
}

json cmd_spectrum(const json& cfg) {
  const Cluster c = cluster_of(cfg);
  json levels = json::array();
  for (const Level& l : c.levels.levels) {
    levels.push_back({{"label", l.label}, {"S", l.S}, {"energy", l.energy}, {"multiplicity", l.multiplicity}});
  }
  const double discrepancy = level_discrepancy(c.levels, heisenberg_hamiltonian(c.reg, c.couplings));
  json ordering = nullptr;
  if (cfg.at("cluster").at("kind") == "parallelogram") {
    const OrderingReport r = ordering_report(num(cfg.at("cluster"), "a12"), num(cfg.at("cluster"), "a13"));
    ordering = {{"chain", r.chain},
                {"link_holds", r.link_holds},
                {"all_hold", r.all_hold()},
                {"ground_is_first", r.ground_is_first}};
  }
  json out = {{"subcommand", "spectrum"},
              {"cluster", cfg.at("cluster")},
              {"levels", levels},
              {"total_multiplicity", c.levels.total_multiplicity()},
              {"weighted_sum", c.levels.weighted_sum()},
              {"numeric_discrepancy", discrepancy},
              {"ground", ground_json(ground_levels(c.levels))},
              {"ordering", ordering}};
  if (discrepancy > kLevelCheckTolerance * level_scale(c.levels)) {
    throw CheckFailed("spectrum: closed forms differ from diagonalization by " + format_double(discrepancy));
  }
  return out;
}

double round12(double x) {
  const double r = std::round(x * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

json cmd_moments(const json& cfg) {
  const Cluster c = cluster_of(cfg);
  const OperatorMatrix h = heisenberg_hamiltonian(c.reg, c.couplings);
  const GroundLevels g = ground_levels(c.levels);
  const json& mcfg = cfg.at("moments");
  double m = 0.0;
  if (!mcfg.at("m").is_null()) {
    m = mcfg.at("m").get<double>();
  } else {
    if (!g.S) {
      throw PreconditionError("moments: ground levels " + json(g.labels).dump() +
                              " carry different S; set moments.m explicitly");
    }
    m = -*g.S;
  }
  const SectorGround sg = ground_state_in_sector(c.reg, h, m);
  if (sg.gap <= 1e-9 * level_scale(c.levels)) {
    throw PreconditionError("moments: lowest state in the m = " + format_double(m) +
                            " sector is degenerate; the moment pattern is not unique");
  }
  const double g_factor = mcfg.at("g").get<double>();
  const MomentVector mv = local_moments(c.reg, sg.state, g_factor);
  const SpinLabels labels = total_spin_labels(c.reg, sg.state);

  std::vector<double> rounded;
  for (double x : mv.mu) rounded.push_back(round12(x));
  return {{"subcommand", "moments"},
          {"cluster", cfg.at("cluster")},
          {"g", g_factor},
          {"S", labels.S},
          {"m", labels.m},
          {"energy", sg.energy},
          {"sector_gap", std::isfinite(sg.gap) ? json(sg.gap) : json(nullptr)},
          {"mu", rounded},
          {"mu_raw", mv.mu},
          {"sum", mv.sum()},
          {"sum_rule_residual", mv.sum_rule_residual}};
}

std::string cmd_phase_map(const json& cfg) {
  const json& p = cfg.at("phase_map");
  const AxisRange x{p["a12"][0].get<double>(), p["a12"][1].get<double>()};
  const AxisRange y{p["a13"][0].get<double>(), p["a13"][1].get<double>()};
  std::ostringstream os;
  os << "a12,a13,ground_labels,ground_S,ground_energy\n";
  for (const PhasePoint& pt : phase_map(x, y, p.at("n_grid").get<int>())) {
    std::string labels;
    for (std::size_t i = 0; i < pt.ground_labels.size(); ++i) labels += (i ? ";" : "") + pt.ground_labels[i];
    os << format_double(pt.a12) << ',' << format_double(pt.a13) << ',' << labels << ','
       << (pt.ground_S ? format_double(*pt.ground_S) : std::string("degenerate-mixed")) << ','
       << format_double(pt.ground_energy) << '\n';
  }
  return os.str();
}

std::string cmd_levels_report(const json& cfg) {
  const json& lr = cfg.at("levels_report");
  const double lo = lr["B"][0].get<double>(), hi = lr["B"][1].get<double>();
  const int points = lr.at("points").get<int>();
  if (!(lo <= hi)) throw DomainError("levels_report.B range is inverted");
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));

  const json& rates = cfg.at("rates");
  const LevelComparisonReport rep = coupled_levels_report(grid, num(rates, "delta_gap"), num(rates, "gamma"));
  const std::array<bool, 9> asserted = {false, false, true, true, true, true, true, false, false};

  std::ostringstream os;
  os << "B,level,numeric,printed,corrected,printed_abs_diff,corrected_abs_diff,asserted\n";
  for (std::size_t k = 0; k < rep.B.size(); ++k) {
    for (int i = 0; i < 9; ++i) {
      os << format_double(rep.B[k]) << ',' << rep.labels[i] << ',' << format_double(rep.numeric[k][i]) << ','
         << format_double(rep.printed[k][i]) << ',' << format_double(rep.corrected[k][i]) << ','
         << format_double(std::abs(rep.printed[k][i] - rep.numeric[k][i])) << ','
         << format_double(std::abs(rep.corrected[k][i] - rep.numeric[k][i])) << ',' << (asserted[i] ? 1 : 0)
         << '\n';
    }
  }
  if (!rep.asserted_ok) {
    throw CheckFailed("levels-report: zero or E2_+-1 levels differ from numerics by " +
                      format_double(rep.asserted_discrepancy));
  }
  if (rep.max_eigen_residual > kEigenResidualTolerance) {
    throw CheckFailed("levels-report: eigen residual " + format_double(rep.max_eigen_residual));
  }
  return os.str();
}

std::string cmd_simulate(const json& cfg) {
  const json& r = cfg.at("rates");
  const json& f = cfg.at("field");
  const json& in = cfg.at("initial");
  const json& sim = cfg.at("simulation");
  const RateParams params{num(r, "A"), num(r, "inv_temp"), num(r, "gamma"), num(r, "delta_gap")};
  const FieldProfile profile{field_kind_from_string(f.at("kind")), num(f, "amplitude"), num(f, "angular_rate"),
                             num(f, "t_start"), num(f, "t_end")};
  InitialCondition init;
  const std::string kind = in.at("kind");
  if (kind == "polarized_up") init = InitialCondition::polarized_up();
  if (kind == "explicit") init = InitialCondition::explicit_state(num(in, "n0"), num(in, "rho00"));

  const Trajectory traj =
      integrate_magnetization(params, profile, init, sim.at("steps").get<int>(),
                              lzs_mode_from_string(sim.at("lzs_mode")), coefficient_mode_from_string(sim.at("mode")));

  std::string csv = "t,B,M_norm,rho00,n\n";
  csv.reserve(traj.rows.size() * 96);
  char line[160];
  for (const TrajectoryRow& row : traj.rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", row.t, row.B, row.M_norm, row.rho00, row.n);
    csv += line;
  }
  if (traj.max_abs_m() > 1.0 + kMagnetizationSlack) {
    throw CheckFailed("simulate: |M_norm| reached " + format_double(traj.max_abs_m()));
  }
  if (traj.max_population_violation > kTrajectoryPopulationTolerance) {
    throw CheckFailed("simulate: populations left [0, 1] by " + format_double(traj.max_population_violation));
  }
  return csv;
}

std::string render(const std::string& sub, const json& cfg) {
  static const std::map<std::string, std::function<json(const json&)>> json_cmds = {
      {"q-spectrum", cmd_q_spectrum}, {"check-yangian", cmd_check_yangian}, {"commutant", cmd_commutant},
      {"spectrum", cmd_spectrum},     {"moments", cmd_moments}};
  if (auto it = json_cmds.find(sub); it != json_cmds.end()) {
    const json doc = it->second(cfg);
    if (const std::string e = validate_against_schema(doc, output_schema(sub)); !e.empty()) {
      throw CheckFailed(sub + ": report does not match its output schema: " + e);
    }
    return doc.dump(2) + "\n";
  }
  if (sub == "phase-map") return cmd_phase_map(cfg);
  if (sub == "levels-report") return cmd_levels_report(cfg);
  if (sub == "simulate") return cmd_simulate(cfg);
  throw DomainError("unknown subcommand '" + sub + "'");
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DomainError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

struct Flags {
  std::string config_path;
  std::string positional_config;
  std::string out_path;
  std::string preset;
  std::string mode;
  int steps = 0;
  int sites = 0;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-cluster numerics: Yangian operators, exact spectra, moments and magnetization dynamics",
               "spincluster"};
  app.require_subcommand(1);
  Flags flags;
  for (const std::string& name : subcommands()) {
    CLI::App* sc = app.add_subcommand(name);
    sc->add_option("config_file", flags.positional_config, "JSON config file (same as --config)");
    sc->add_option("--config", flags.config_path, "JSON config file");
    sc->add_option("--out", flags.out_path, "Write the report to this file instead of stdout");
    sc->add_option("--preset", flags.preset, "Named scenario")->check(CLI::IsMember(presets()));
    sc->add_option("--mode", flags.mode, "Rate coefficient mode")->check(CLI::IsMember({"derived", "paper_verbatim"}));
    sc->add_option("--steps", flags.steps, "Integration steps")->check(CLI::PositiveNumber);
    sc->add_option("--sites", flags.sites, "Number of spin-1/2 sites")->check(CLI::Range(2, SpinRegister::kMaxSites));
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfigError;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (!flags.config_path.empty() && !flags.positional_config.empty()) {
      throw DomainError("give the config either positionally or with --config, not both");
    }
    json user = json::object();
    if (!flags.preset.empty()) user = preset_config(flags.preset);
    const std::string path = flags.config_path.empty() ? flags.positional_config : flags.config_path;
    if (!path.empty()) {
      const json file = read_config_file(path);
      if (!file.is_object()) throw DomainError("config: top level must be a JSON object");
      user.merge_patch(file);
    }
    if (flags.sites > 0) user["sites"] = flags.sites;
    if (flags.steps > 0) user["simulation"]["steps"] = flags.steps;
    if (!flags.mode.empty()) user["simulation"]["mode"] = flags.mode;

    const std::string report = render(sub, normalize_config(user));
    if (flags.out_path.empty()) {
      out << report;
    } else {
      std::ofstream file(flags.out_path, std::ios::binary);
      if (!file) throw DomainError("cannot open output file '" + flags.out_path + "'");
      file << report;
      if (!file) throw DomainError("failed writing '" + flags.out_path + "'");
    }
    return kExitOk;
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace spincluster::cli
