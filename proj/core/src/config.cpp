#include "valid/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "valid/errors.hpp"

namespace valid {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Typed, path-aware access to one JSON object; rejects unknown keys on finish().
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return as_number(at(key), path(key));
  }

  uint64_t uint(const std::string& key, uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
      throw ConfigError(path(key), "expected a nonnegative integer");
    }
    return v.get<uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  /// A number, or one of the listed keywords (returned as nullopt).
  std::optional<double> number_or(const std::string& key, const std::string& keyword,
                                  std::optional<double> fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (v.is_string()) {
      if (v.get<std::string>() == keyword) return std::nullopt;
      throw ConfigError(path(key), "expected a number or \"" + keyword + "\"");
    }
    return as_number(v, path(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ConfigError(join(path_, key), "unknown field");
    }
  }

  static double as_number(const json& v, const std::string& p) {
    if (!v.is_number()) throw ConfigError(p, "expected a number");
    return v.get<double>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::vector<double> read_vector(const json& v, const std::string& p) {
  if (!v.is_array() || v.empty()) throw ConfigError(p, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(Reader::as_number(v[i], p + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> read_matrix(const json& v, const std::string& p) {
  if (!v.is_array() || v.empty()) throw ConfigError(p, "expected a nonempty array of vectors");
  std::vector<std::vector<double>> out;
  for (size_t i = 0; i < v.size(); ++i) {
    out.push_back(read_vector(v[i], p + "[" + std::to_string(i) + "]"));
    if (out.back().size() != out.front().size()) throw ConfigError(p, "vectors differ in dimension");
  }
  return out;
}

AgentSet read_agents(const json& v, const std::string& p) {
  if (!v.is_array()) throw ConfigError(p, "expected an array of agent ids");
  AgentSet out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer() || v[i].get<int64_t>() < 0) {
      throw ConfigError(p + "[" + std::to_string(i) + "]", "expected a nonnegative integer");
    }
    out.push_back(v[i].get<AgentId>());
  }
  return out;
}

GraphSpec parse_graph(const json& j, const std::string& p) {
  Reader r(j, p);
  GraphSpec g;
  const std::string family = r.string("family", "two_clique_bridge");
  if (family == "two_clique_bridge") {
    g.family = GraphSpec::Family::kTwoCliqueBridge;
    g.n = 20;
  } else if (family == "ring" || family == "complete" || family == "erdos_renyi") {
    g.family = family == "ring"       ? GraphSpec::Family::kRing
               : family == "complete" ? GraphSpec::Family::kComplete
                                      : GraphSpec::Family::kErdosRenyi;
    if (!r.has("n")) throw ConfigError(r.path("n"), "required for family " + family);
    g.n = r.uint("n", 0);
    if (g.family == GraphSpec::Family::kErdosRenyi) {
      g.p = r.number("p", 0.5);
      if (!(g.p >= 0.0 && g.p <= 1.0)) throw ConfigError(r.path("p"), "must lie in [0, 1]");
    }
  } else if (family == "edge_list") {
    g.family = GraphSpec::Family::kEdgeList;
    g.path = r.string("path", "");
    if (g.path.empty()) throw ConfigError(r.path("path"), "required for family edge_list");
  } else {
    throw ConfigError(r.path("family"), "unknown graph family '" + family + "'");
  }
  r.finish();
  return g;
}

LossSpec parse_loss(const json& j, const std::string& p) {
  Reader r(j, p);
  LossSpec s;
  const std::string kind = r.string("kind", "quadratic");
  if (kind == "quadratic") {
    s.kind = LossKind::kQuadratic;
  } else if (kind == "logistic") {
    s.kind = LossKind::kLogistic;
  } else {
    throw ConfigError(r.path("kind"), "expected \"quadratic\" or \"logistic\"");
  }
  const char* key = s.kind == LossKind::kQuadratic ? "mean" : "center";
  const std::string shared = key;
  const std::string per_agent = shared + "s";
  const std::string groups = "group_" + shared + "s";
  int given = 0;
  if (r.has(shared)) {
    s.layout = LossSpec::Layout::kShared;
    s.means = {read_vector(r.at(shared), r.path(shared))};
    ++given;
  }
  if (r.has(per_agent)) {
    s.layout = LossSpec::Layout::kPerAgent;
    s.means = read_matrix(r.at(per_agent), r.path(per_agent));
    ++given;
  }
  if (r.has(groups)) {
    s.layout = LossSpec::Layout::kGroups;
    s.means = read_matrix(r.at(groups), r.path(groups));
    ++given;
  }
  if (given > 1) throw ConfigError(p, "give only one of " + shared + ", " + per_agent + ", " + groups);
  if (given == 0) s.means = {std::vector<double>(static_cast<size_t>(r.uint("dim", 1)), 0.0)};
  if (r.has("dim") && r.uint("dim", 0) != s.means.front().size()) {
    throw ConfigError(r.path("dim"), "does not match the given vectors");
  }
  if (s.kind == LossKind::kQuadratic) {
    s.sigma_d = r.number("sigma_d", 1.0);
    if (!(s.sigma_d >= 0.0)) throw ConfigError(r.path("sigma_d"), "must be nonnegative");
  } else {
    s.truth = r.has("truth") ? read_vector(r.at("truth"), r.path("truth"))
                             : std::vector<double>(s.means.front().size(), 1.0);
    if (s.truth.size() != s.means.front().size()) throw ConfigError(r.path("truth"), "dimension mismatch");
    s.points = r.uint("points", 50);
    if (s.points == 0) throw ConfigError(r.path("points"), "must be positive");
    s.spread = r.number("spread", 1.0);
    s.l2 = r.number("l2", 0.1);
    if (!(s.l2 > 0.0)) throw ConfigError(r.path("l2"), "must be positive");
    s.data_seed = r.uint("data_seed", 1);
  }
  r.finish();
  return s;
}

AttackConfig parse_attack(const json& j, const std::string& p) {
  Reader r(j, p);
  AttackConfig a;
  try {
    a.spec.strategy = parse_strategy(r.string("strategy", "none"));
  } catch (const InvalidParameter& e) {
    throw ConfigError(r.path("strategy"), e.what());
  }
  if (r.has("byzantine")) a.spec.byzantine = read_agents(r.at("byzantine"), r.path("byzantine"));
  using S = AttackSpec::Strategy;
  switch (a.spec.strategy) {
    case S::kNone:
    case S::kBroadcastTamper:
      break;
    case S::kGaussian: {
      const auto sigma = r.number_or("sigma", "strong", std::nullopt);
      a.sigma_strong = !sigma.has_value();
      a.spec.sigma = sigma.value_or(0.0);
      a.sigma_scale = r.number("sigma_scale", 1.0);
      if (!(a.spec.sigma >= 0.0) || !(a.sigma_scale >= 0.0)) {
        throw ConfigError(r.path("sigma"), "must be nonnegative");
      }
      break;
    }
    case S::kBenign:
      if (!r.has("q_means")) throw ConfigError(r.path("q_means"), "required for benign attacks");
      a.spec.q_means = read_matrix(r.at("q_means"), r.path("q_means"));
      break;
    case S::kEquivocate: {
      if (r.has("rounds")) {
        const json& v = r.at("rounds");
        if (!v.is_array()) throw ConfigError(r.path("rounds"), "expected an array of rounds");
        for (const auto& e : v) {
          if (!e.is_number_integer() || e.get<int>() < 1) throw ConfigError(r.path("rounds"), "rounds are >= 1");
          a.spec.rounds.push_back(e.get<int>());
        }
      }
      a.spec.magnitude = r.number("magnitude", 1.0 / static_cast<double>(Fixed::kOneRaw));
      if (!(a.spec.magnitude >= 0.0)) throw ConfigError(r.path("magnitude"), "must be nonnegative");
      const std::string target = r.string("target", "model");
      if (target == "model") {
        a.spec.target = AttackSpec::Target::kModel;
      } else if (target == "gradient") {
        a.spec.target = AttackSpec::Target::kGradient;
      } else {
        throw ConfigError(r.path("target"), "expected \"model\" or \"gradient\"");
      }
      break;
    }
    case S::kLateAlarm:
      a.spec.alarm_round = r.uint("round", 0);
      if (r.has("targets")) a.spec.alarm_targets = read_agents(r.at("targets"), r.path("targets"));
      break;
  }
  r.finish();
  if (a.spec.strategy != S::kNone && a.spec.byzantine.empty()) {
    throw ConfigError(join(p, "byzantine"), "an attack needs at least one Byzantine agent");
  }
  return a;
}

RunConfig parse_json(const json& j) {
  Reader r(j, "");
  RunConfig c;
  c.seed = r.uint("seed", 1);
  if (r.has("graph")) c.graph = parse_graph(r.at("graph"), "graph");
  if (r.has("loss")) c.loss = parse_loss(r.at("loss"), "loss");
  c.batch = r.uint("batch", 10);
  if (c.batch == 0) throw ConfigError("batch", "must be positive");
  const uint64_t rounds = r.uint("rounds", 1000);
  if (rounds < 2 || rounds > 1000000) throw ConfigError("rounds", "must lie in [2, 1000000]");
  c.rounds = static_cast<int>(rounds);
  c.alpha0 = r.number_or("alpha0", "auto", std::nullopt);
  c.eta0 = r.number_or("eta0", "auto", std::nullopt);
  c.gamma = r.number_or("gamma", "calibrate", std::nullopt);
  if (c.gamma && !(*c.gamma >= 0.0 && *c.gamma < 1.0)) throw ConfigError("gamma", "must lie in [0, 1)");
  c.epsilon = r.number("epsilon", 0.25);
  if (!(c.epsilon >= 0.0)) throw ConfigError("epsilon", "must be nonnegative");
  c.delta = r.number_or("delta", "oracle", std::nullopt);
  if (c.delta && !(*c.delta >= 0.0)) throw ConfigError("delta", "must be nonnegative");
  if (r.has("bounds")) {
    const json& b = r.at("bounds");
    if (b.is_string()) {
      if (b.get<std::string>() != "calibrate") throw ConfigError("bounds", "expected \"calibrate\" or an object");
    } else {
      Reader br(b, "bounds");
      c.bounds.calibrate = false;
      c.bounds.model = br.number("model", 0.0);
      c.bounds.gradient = br.number("gradient", 0.0);
      if (!(c.bounds.model > 0.0) || !(c.bounds.gradient > 0.0)) {
        throw ConfigError("bounds", "model and gradient bounds must be positive");
      }
      br.finish();
    }
  }
  if (r.has("calibration")) {
    Reader cr(r.at("calibration"), "calibration");
    c.calibration.runs = static_cast<int>(cr.uint("runs", 5));
    if (c.calibration.runs < 1) throw ConfigError("calibration.runs", "must be positive");
    c.calibration.margin = cr.number("margin", 2.0);
    if (!(c.calibration.margin >= 1.0)) throw ConfigError("calibration.margin", "must be at least 1");
    c.calibration.seed = cr.uint("seed", 1000003);
    cr.finish();
  }
  if (r.has("attack")) c.attack = parse_attack(r.at("attack"), "attack");
  const std::string baseline = r.string("baseline", "none");
  if (baseline == "none") {
    c.baseline = Baseline::kNone;
  } else if (baseline == "coordinate_median") {
    c.baseline = Baseline::kCoordinateMedian;
  } else {
    throw ConfigError("baseline", "expected \"none\" or \"coordinate_median\"");
  }
  c.prime = r.uint("prime", kMersenne61);
  if (c.prime >= (uint64_t{1} << 63) || !is_prime(c.prime)) throw ConfigError("prime", "must be a prime below 2^63");
  c.allow_assumption_violation = r.boolean("allow_assumption_violation", false);
  r.finish();
  return c;
}

json vec_json(const std::vector<double>& v) { return json(v); }

json to_json_value(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  json g;
  g["family"] = to_string(c.graph.family);
  switch (c.graph.family) {
    case GraphSpec::Family::kTwoCliqueBridge: break;
    case GraphSpec::Family::kErdosRenyi: g["p"] = c.graph.p; [[fallthrough]];
    case GraphSpec::Family::kRing:
    case GraphSpec::Family::kComplete: g["n"] = c.graph.n; break;
    case GraphSpec::Family::kEdgeList: g["path"] = c.graph.path; break;
  }
  j["graph"] = g;

  json l;
  const bool quad = c.loss.kind == LossKind::kQuadratic;
  l["kind"] = to_string(c.loss.kind);
  const std::string key = quad ? "mean" : "center";
  switch (c.loss.layout) {
    case LossSpec::Layout::kShared: l[key] = vec_json(c.loss.means.front()); break;
    case LossSpec::Layout::kPerAgent: l[key + "s"] = c.loss.means; break;
    case LossSpec::Layout::kGroups: l["group_" + key + "s"] = c.loss.means; break;
  }
  if (quad) {
    l["sigma_d"] = c.loss.sigma_d;
  } else {
    l["truth"] = c.loss.truth;
    l["points"] = c.loss.points;
    l["spread"] = c.loss.spread;
    l["l2"] = c.loss.l2;
    l["data_seed"] = c.loss.data_seed;
  }
  j["loss"] = l;

  j["batch"] = c.batch;
  j["rounds"] = c.rounds;
  j["alpha0"] = c.alpha0 ? json(*c.alpha0) : json("auto");
  j["eta0"] = c.eta0 ? json(*c.eta0) : json("auto");
  j["gamma"] = c.gamma ? json(*c.gamma) : json("calibrate");
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta ? json(*c.delta) : json("oracle");
  if (c.bounds.calibrate) {
    j["bounds"] = "calibrate";
  } else {
    j["bounds"] = {{"model", c.bounds.model}, {"gradient", c.bounds.gradient}};
  }
  j["calibration"] = {{"runs", c.calibration.runs},
                      {"margin", c.calibration.margin},
                      {"seed", c.calibration.seed}};

  json a;
  const auto& s = c.attack.spec;
  a["strategy"] = to_string(s.strategy);
  a["byzantine"] = s.byzantine;
  using S = AttackSpec::Strategy;
  switch (s.strategy) {
    case S::kNone:
    case S::kBroadcastTamper: break;
    case S::kGaussian:
      a["sigma"] = c.attack.sigma_strong ? json("strong") : json(s.sigma);
      a["sigma_scale"] = c.attack.sigma_scale;
      break;
    case S::kBenign: a["q_means"] = s.q_means; break;
    case S::kEquivocate:
      a["rounds"] = s.rounds;
      a["magnitude"] = s.magnitude;
      a["target"] = s.target == AttackSpec::Target::kModel ? "model" : "gradient";
      break;
    case S::kLateAlarm:
      a["round"] = s.alarm_round;
      a["targets"] = s.alarm_targets;
      break;
  }
  j["attack"] = a;
  j["baseline"] = to_string(c.baseline);
  j["prime"] = c.prime;
  j["allow_assumption_violation"] = c.allow_assumption_violation;
  return j;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

const char* to_string(Baseline baseline) {
  return baseline == Baseline::kNone ? "none" : "coordinate_median";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_json(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const RunConfig& config) { return to_json_value(config).dump(); }

std::string config_hash(const RunConfig& config) {
  json j = to_json_value(config);
  j.erase("seed");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

RunConfig honest_config(const RunConfig& config) {
  RunConfig c = config;
  c.attack = AttackConfig{};
  c.baseline = Baseline::kNone;
  return c;
}

std::string set_config_field(const std::string& text, const std::string& path,
                             const std::string& json_value) {
  json doc;
  json value;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  try {
    value = json::parse(json_value);
  } catch (const json::parse_error&) {
    value = json_value;  // bare words are taken as strings
  }
  if (path.empty()) throw ConfigError("", "empty field path");
  json* node = &doc;
  std::string walked;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    walked = join(walked, key);
    if (key.empty()) throw ConfigError(path, "malformed field path");
    if (!node->is_object()) throw ConfigError(walked, "parent is not an object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
  return doc.dump();
}

LossModel build_loss(const LossSpec& spec, size_t agents) {
  std::vector<std::vector<double>> per_agent(agents);
  for (size_t v = 0; v < agents; ++v) {
    switch (spec.layout) {
      case LossSpec::Layout::kShared: per_agent[v] = spec.means.front(); break;
      case LossSpec::Layout::kPerAgent:
        if (spec.means.size() != agents) {
          throw ConfigError("loss", "need one vector per agent (" + std::to_string(agents) + ")");
        }
        per_agent[v] = spec.means[v];
        break;
      case LossSpec::Layout::kGroups: per_agent[v] = spec.means[v * spec.means.size() / agents]; break;
    }
  }
  if (spec.kind == LossKind::kQuadratic) return LossModel::quadratic(std::move(per_agent), spec.sigma_d);
  return make_synthetic_logistic(per_agent, spec.truth, spec.points, spec.spread, spec.l2, spec.data_seed);
}

}  // namespace valid
