#include "olp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace olp::cli {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Walks one JSON object, remembering which keys were read so that leftovers
// can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    return v.get<double>();
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number_unsigned())
      throw ConfigError(field(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    if (!has(key)) throw ConfigError(field(key), "missing required field");
    const Json& v = raw(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    return v.get<std::string>();
  }

  Vec numbers(const std::string& key, Vec fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_array()) throw ConfigError(field(key), "expected an array of numbers");
    Vec out;
    for (const Json& e : v) {
      if (!e.is_number()) throw ConfigError(field(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void forbid(const std::string& key, const std::string& why) {
    if (has(key)) throw ConfigError(field(key), why);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

gen::Consumption parse_consumption(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind = r.string("kind");
  gen::Consumption c;
  if (kind == "constant") {
    c = gen::constant_consumption(r.numbers("value", {1.0}));
    if (c.value.empty()) throw ConfigError(r.field("value"), "must not be empty");
  } else if (kind == "box") {
    if (!r.has("lo") || !r.has("hi"))
      throw ConfigError(path, "box consumption needs lo and hi");
    c = gen::box_consumption(r.numbers("lo", {}), r.numbers("hi", {}));
    if (c.lo.empty() || c.lo.size() != c.hi.size())
      throw ConfigError(path, "lo and hi must be non-empty and equally long");
  } else {
    throw ConfigError(r.field("kind"), "expected \"constant\" or \"box\"");
  }
  r.finish();
  return c;
}

gen::GeneratorSpec parse_generator(const Json& j) {
  ObjectReader r(j, "generator");
  const std::string family_name = r.string("family");
  gen::Family family;
  try {
    family = gen::family_from_name(family_name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("generator.family", e.what());
  }

  // Keys each family understands beyond family/consumption/bounds/m.
  std::set<std::string> allowed;
  switch (family) {
    case gen::Family::kStationaryUniform: allowed = {"u_max"}; break;
    case gen::Family::kLinearDrift: allowed = {"u_max", "tilt_start", "tilt_end"}; break;
    case gen::Family::kSinusoidal:
      allowed = {"u_max", "tilt_mean", "tilt_amplitude", "cycles"};
      break;
    case gen::Family::kTwoPhaseExample1: allowed = {"shifted"}; break;
    case gen::Family::kCustomTable: allowed = {"u_max", "table_t", "table_tilt"}; break;
  }
  for (const char* key : {"u_max", "tilt_start", "tilt_end", "tilt_mean",
                          "tilt_amplitude", "cycles", "table_t", "table_tilt",
                          "shifted"})
    if (!allowed.count(key))
      r.forbid(key, "not used by family " + family_name);
  if (family == gen::Family::kTwoPhaseExample1)
    r.forbid("consumption", "two_phase_example1 has fixed consumption a = 1");

  gen::GeneratorSpec spec;
  gen::Consumption c;
  if (r.has("consumption")) c = parse_consumption(r.raw("consumption"), "generator.consumption");
  const double u_max = r.number("u_max", 1.0);
  switch (family) {
    case gen::Family::kStationaryUniform:
      spec = gen::stationary_uniform(u_max, c);
      break;
    case gen::Family::kLinearDrift:
      spec = gen::linear_drift(r.number("tilt_start", 0.0), r.number("tilt_end", 0.0),
                               u_max, c);
      break;
    case gen::Family::kSinusoidal:
      spec = gen::sinusoidal(r.number("tilt_mean", 0.0), r.number("tilt_amplitude", 0.0),
                             r.number("cycles", 1.0), u_max, c);
      break;
    case gen::Family::kTwoPhaseExample1:
      spec = gen::two_phase_example1(r.boolean("shifted", true));
      break;
    case gen::Family::kCustomTable:
      spec = gen::custom_table(r.numbers("table_t", {}), r.numbers("table_tilt", {}),
                               u_max, c);
      break;
  }
  if (r.has("m") && r.unsigned_int("m", 0) != spec.m)
    throw ConfigError("generator.m", "does not match the consumption dimension");
  if (r.has("bounds")) {
    ObjectReader b(r.raw("bounds"), "generator.bounds");
    spec.declared.alpha = b.number("alpha", -1.0);
    spec.declared.u_bar = b.number("u_bar", -1.0);
    spec.declared.mu_lo = b.number("mu_lo", -1.0);
    spec.declared.mu_hi = b.number("mu_hi", -1.0);
    spec.declared.lipschitz = b.number("lipschitz", -1.0);
    b.finish();
  }
  r.finish();
  try {
    // Surface parameter errors (tilt range, table knots) as config errors.
    (void)gen::validate_generator(spec, {2, 3, 2});
  } catch (const std::invalid_argument& e) {
    throw ConfigError("generator", e.what());
  }
  return spec;
}

policy::PolicySpec parse_policy(const Json& j, const std::string& path, std::size_t m) {
  ObjectReader r(j, path);
  policy::PolicySpec p;
  try {
    p.kind = policy::kind_from_name(r.string("kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(r.field("kind"), e.what());
  }
  if (p.kind == policy::Kind::kFixedPrice) {
    if (!r.has("price")) throw ConfigError(r.field("price"), "missing required field");
    p.price = r.numbers("price", {});
    if (p.price.size() != m) throw ConfigError(r.field("price"), "length must equal m");
    for (double v : p.price)
      if (!(v >= 0.0)) throw ConfigError(r.field("price"), "entries must be >= 0");
  } else {
    r.forbid("price", "only fixed_price takes a price");
  }
  r.finish();
  return p;
}

ExperimentConfig parse_root(const Json& j) {
  ObjectReader r(j, "");
  ExperimentConfig cfg;
  if (!r.has("generator")) throw ConfigError("generator", "missing required field");
  cfg.generator = parse_generator(r.raw("generator"));
  const std::size_t m = cfg.generator.m;

  if (!r.has("policies")) throw ConfigError("policies", "missing required field");
  const Json& pol = r.raw("policies");
  if (!pol.is_array() || pol.empty())
    throw ConfigError("policies", "expected a non-empty array");
  for (std::size_t i = 0; i < pol.size(); ++i)
    cfg.policies.push_back(parse_policy(pol[i], "policies[" + std::to_string(i) + "]", m));

  if (!r.has("n_grid")) throw ConfigError("n_grid", "missing required field");
  const Json& grid = r.raw("n_grid");
  if (!grid.is_array() || grid.empty())
    throw ConfigError("n_grid", "expected a non-empty array of positive integers");
  for (const Json& e : grid) {
    if (!e.is_number_unsigned() || e.get<std::uint64_t>() == 0)
      throw ConfigError("n_grid", "expected a non-empty array of positive integers");
    cfg.n_grid.push_back(e.get<std::size_t>());
  }
  for (std::size_t i = 1; i < cfg.n_grid.size(); ++i)
    if (cfg.n_grid[i] <= cfg.n_grid[i - 1])
      throw ConfigError("n_grid", "n_grid not increasing");

  cfg.reps = r.unsigned_int("reps", 2);
  if (!r.has("d0")) throw ConfigError("d0", "missing required field");
  cfg.d0 = r.numbers("d0", {});
  if (cfg.d0.size() != m) throw ConfigError("d0", "length must equal m");
  for (double v : cfg.d0)
    if (!(v > 0.0)) throw ConfigError("d0", "entries must be positive");
  if (!r.has("seed")) throw ConfigError("seed", "missing required field");
  cfg.seed = r.unsigned_int("seed", 0);
  cfg.outputs = r.string("outputs");

  if (r.has("analysis")) {
    ObjectReader a(r.raw("analysis"), "analysis");
    cfg.analysis.regret = a.boolean("regret", true);
    cfg.analysis.dual_convergence = a.boolean("dual_convergence", false);
    cfg.analysis.state_deviation = a.boolean("state_deviation", false);
    cfg.analysis.fit = a.boolean("fit", false);
    a.finish();
  }
  if (r.has("population")) {
    ObjectReader p(r.raw("population"), "population");
    cfg.population.K = p.unsigned_int("K", 200);
    cfg.population.K_delta = p.unsigned_int("K_delta", 500);
    cfg.population.bootstrap = p.unsigned_int("bootstrap", 20);
    if (cfg.population.K == 0) throw ConfigError("population.K", "must be >= 1");
    if (cfg.population.K_delta == 0) throw ConfigError("population.K_delta", "must be >= 1");
    p.finish();
  }
  if (r.has("state_deviation")) {
    ObjectReader s(r.raw("state_deviation"), "state_deviation");
    cfg.deviation.eps_d = s.number("eps_d", 0.1);
    cfg.deviation.policy = s.unsigned_int("policy", 0);
    cfg.deviation.stride = s.unsigned_int("stride", 1);
    if (!(cfg.deviation.eps_d > 0.0))
      throw ConfigError("state_deviation.eps_d", "must be positive");
    if (cfg.deviation.policy >= cfg.policies.size())
      throw ConfigError("state_deviation.policy", "index out of range");
    if (cfg.deviation.stride == 0)
      throw ConfigError("state_deviation.stride", "must be >= 1");
    s.finish();
  }
  if (r.has("dual_convergence")) {
    ObjectReader d(r.raw("dual_convergence"), "dual_convergence");
    cfg.dual_convergence_reps = d.unsigned_int("reps", 0);
    d.finish();
  }
  r.finish();

  const bool wants_stderr = cfg.analysis.regret || cfg.analysis.dual_convergence ||
                            cfg.analysis.state_deviation;
  if (wants_stderr && cfg.reps < 2) throw ConfigError("reps", "must be >= 2");
  if (cfg.analysis.fit && !cfg.analysis.regret)
    throw ConfigError("analysis.fit", "requires analysis.regret");
  if (cfg.analysis.fit && cfg.n_grid.size() < 3)
    throw ConfigError("analysis.fit", "needs at least 3 grid points");
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("parse", e.what());
  }
  return parse_root(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string(), e.what());
  }
  if (j.is_object() && j.contains("manifest_version") && j.contains("config"))
    return parse_root(j.at("config"));
  return parse_root(j);
}

namespace {

OrderedJson generator_json(const gen::GeneratorSpec& s) {
  OrderedJson g;
  g["family"] = gen::family_name(s.family);
  const auto& p = s.params;
  switch (s.family) {
    case gen::Family::kStationaryUniform: g["u_max"] = p.u_max; break;
    case gen::Family::kLinearDrift:
      g["u_max"] = p.u_max;
      g["tilt_start"] = p.tilt_start;
      g["tilt_end"] = p.tilt_end;
      break;
    case gen::Family::kSinusoidal:
      g["u_max"] = p.u_max;
      g["tilt_mean"] = p.tilt_mean;
      g["tilt_amplitude"] = p.tilt_amplitude;
      g["cycles"] = p.cycles;
      break;
    case gen::Family::kTwoPhaseExample1: g["shifted"] = p.shifted; break;
    case gen::Family::kCustomTable:
      g["u_max"] = p.u_max;
      g["table_t"] = p.table_t;
      g["table_tilt"] = p.table_tilt;
      break;
  }
  if (s.family != gen::Family::kTwoPhaseExample1) {
    OrderedJson c;
    if (p.consumption.kind == gen::Consumption::Kind::kConstant) {
      c["kind"] = "constant";
      c["value"] = p.consumption.value;
    } else {
      c["kind"] = "box";
      c["lo"] = p.consumption.lo;
      c["hi"] = p.consumption.hi;
    }
    g["consumption"] = c;
  }
  const auto& d = s.declared;
  if (d.alpha >= 0 || d.u_bar >= 0 || d.mu_lo >= 0 || d.mu_hi >= 0 || d.lipschitz >= 0) {
    OrderedJson b = OrderedJson::object();
    if (d.alpha >= 0) b["alpha"] = d.alpha;
    if (d.u_bar >= 0) b["u_bar"] = d.u_bar;
    if (d.mu_lo >= 0) b["mu_lo"] = d.mu_lo;
    if (d.mu_hi >= 0) b["mu_hi"] = d.mu_hi;
    if (d.lipschitz >= 0) b["lipschitz"] = d.lipschitz;
    g["bounds"] = b;
  }
  return g;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c, int indent) {
  OrderedJson j;
  j["generator"] = generator_json(c.generator);
  OrderedJson pols = OrderedJson::array();
  for (const auto& p : c.policies) {
    OrderedJson e;
    e["kind"] = policy::kind_name(p.kind);
    if (p.kind == policy::Kind::kFixedPrice) e["price"] = p.price;
    pols.push_back(e);
  }
  j["policies"] = pols;
  j["n_grid"] = c.n_grid;
  j["reps"] = c.reps;
  j["d0"] = c.d0;
  j["seed"] = c.seed;
  j["outputs"] = c.outputs;
  j["analysis"] = {{"regret", c.analysis.regret},
                   {"dual_convergence", c.analysis.dual_convergence},
                   {"state_deviation", c.analysis.state_deviation},
                   {"fit", c.analysis.fit}};
  j["population"] = {{"K", c.population.K},
                     {"K_delta", c.population.K_delta},
                     {"bootstrap", c.population.bootstrap}};
  j["state_deviation"] = {{"eps_d", c.deviation.eps_d},
                          {"policy", c.deviation.policy},
                          {"stride", c.deviation.stride}};
  j["dual_convergence"] = {{"reps", c.dual_convergence_reps}};
  return j.dump(indent);
}

}  // namespace olp::cli
