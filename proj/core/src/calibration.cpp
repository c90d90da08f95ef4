#include "valid/calibration.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "json.hpp"
#include "valid/errors.hpp"
#include "valid/experiment.hpp"
#include "valid/rng.hpp"

namespace valid {

namespace {

struct HonestRuns {
  std::vector<LearningResult> learning;
  std::vector<std::vector<AgentId>> first_out_edge;  // per run, per agent
  double delta = 0.0;
};

std::mutex cache_mutex;
std::map<std::string, BoundSchedule> bounds_cache;
std::map<std::string, double> gamma_cache;
std::pair<std::string, std::shared_ptr<const HonestRuns>> runs_cache;

// Only the fields that change honest learning trajectories.
std::string learning_key(const RunConfig& config, int runs) {
  auto j = nlohmann::json::parse(to_json(honest_config(config)));
  for (const char* k : {"seed", "gamma", "epsilon", "delta", "bounds", "prime", "attack", "baseline",
                        "allow_assumption_violation"}) {
    j.erase(k);
  }
  j["calibration"].erase("margin");
  j["calibration"]["runs"] = runs;
  return j.dump();
}

std::shared_ptr<const HonestRuns> honest_runs(const RunConfig& config, int runs) {
  if (runs < 1) throw InvalidParameter("calibration needs at least one run");
  const std::string key = learning_key(config, runs);
  if (runs_cache.second && runs_cache.first == key) return runs_cache.second;
  const RunConfig honest = honest_config(config);
  auto out = std::make_shared<HonestRuns>();
  for (int k = 0; k < runs; ++k) {
    PreparedRun prep = prepare_run(honest, calibration_seed(config, k));
    out->delta = prep.delta;
    out->learning.push_back(run_learning(*prep.graph, prep.sources, prep.schedule));
    std::vector<AgentId> first(prep.graph->size());
    for (AgentId v = 0; v < first.size(); ++v) first[v] = prep.graph->out_offset(v);
    out->first_out_edge.push_back(std::move(first));
  }
  runs_cache = {key, out};
  return out;
}

}  // namespace

uint64_t calibration_seed(const RunConfig& config, int k) {
  return derive_key({config.calibration.seed, static_cast<uint64_t>(k)});
}

void clear_calibration_cache() {
  std::lock_guard lock(cache_mutex);
  bounds_cache.clear();
  gamma_cache.clear();
  runs_cache = {};
}

BoundSchedule calibrate_bounds(const RunConfig& config, int runs, double margin) {
  if (!(margin >= 1.0)) throw InvalidParameter("bound margin must be at least 1");
  std::lock_guard lock(cache_mutex);
  const std::string key = learning_key(config, runs) + "|" + std::to_string(margin);
  if (auto it = bounds_cache.find(key); it != bounds_cache.end()) return it->second;

  const auto data = honest_runs(config, runs);
  const size_t T = static_cast<size_t>(config.rounds);
  BoundSchedule b;
  b.model.assign(T + 1, 0.0);
  b.gradient.assign(T + 1, 0.0);
  for (const auto& run : data->learning) {
    for (size_t t = 0; t <= T; ++t) {
      for (size_t v = 0; v < run.states[t].size(); ++v) {
        b.model[t] = std::max(b.model[t], run.states[t][v].norm());
        b.gradient[t] = std::max(b.gradient[t], run.gradient_norms[t][v]);
      }
    }
  }
  for (double& x : b.model) x *= margin;
  for (double& x : b.gradient) x *= margin;
  bounds_cache.emplace(key, b);
  return b;
}

double calibrate_gamma_max(const RunConfig& config, double epsilon, int runs) {
  std::lock_guard lock(cache_mutex);
  const auto data = honest_runs(config, runs);
  const double delta = config.delta.value_or(data->delta);
  const std::string key =
      learning_key(config, runs) + "|" + std::to_string(epsilon) + "|" + std::to_string(delta);
  if (auto it = gamma_cache.find(key); it != gamma_cache.end()) return it->second;

  auto passes = [&](int k) {
    const double gamma = static_cast<double>(k) / 64.0;
    for (size_t r = 0; r < data->learning.size(); ++r) {
      const auto est = estimate_final_gradients(data->learning[r].transcript, gamma);
      std::vector<GradientEstimate> agreed;
      for (AgentId e : data->first_out_edge[r]) agreed.push_back(est[e]);
      if (heterogeneity_statistic(agreed) > delta + epsilon) return false;
    }
    return true;
  };
  if (!passes(0)) throw CalibrationFailed("heterogeneity check fails on honest runs even at gamma = 0");
  int lo = 0;  // passes
  int hi = 64; // gamma = 1 is excluded
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (passes(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double gamma = static_cast<double>(lo) / 64.0;
  gamma_cache.emplace(key, gamma);
  return gamma;
}

}  // namespace valid
