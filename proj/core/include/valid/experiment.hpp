#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "valid/adversary.hpp"
#include "valid/config.hpp"
#include "valid/learning.hpp"
#include "valid/outcome.hpp"
#include "valid/validation.hpp"

namespace valid {

/// Everything a run needs before the first round: graph, distributions,
/// resolved step sizes and per-agent data sources.
struct PreparedRun {
  std::optional<Graph> graph;
  std::shared_ptr<const LossModel> loss;  // after any benign substitution
  StepSchedule schedule;
  double delta = 0.0;
  std::vector<double> xstar;
  std::vector<AgentDataSource> sources;
};

/// Builds the graph and sources for `seed`, resolves alpha0/eta0/delta and
/// checks the schedule invariants. Throws ConfigError on violations,
/// including a Byzantine set that disconnects the honest agents unless
/// allow_assumption_violation is set.
PreparedRun prepare_run(const RunConfig& config, uint64_t seed);

struct RoundMetrics {
  int t = 0;
  double mse = 0.0;         // honest mean squared distance to x*
  double dispersion = 0.0;  // sum over honest v of |x_v - mean|^2
  double grad_norm = 0.0;   // honest mean |g_v|
};

struct AgentRecord {
  AgentId id = 0;
  bool byzantine = false;
  ValidationState state;
};

struct RunRecord {
  std::string mode;  // "valid" or "baseline"
  uint64_t seed = 0;
  std::string config_json;
  std::string config_hash;
  // resolved parameters
  double alpha0 = 0.0;
  double eta0 = 0.0;
  double gamma = 0.0;
  double gamma_bar = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double sigma = 0.0;
  std::vector<double> xstar;

  std::vector<RoundMetrics> rounds;
  std::vector<AgentRecord> agents;
  /// "A", "B", "C", "FAIL", or "NA" for baseline runs.
  std::string outcome;
  double final_mse = 0.0;
  double optimality_statistic = 0.0;
  double heterogeneity_statistic = 0.0;
  std::optional<bool> admissible;
  std::optional<double> top_mean_distance;  // squared distance of TOP mean to x*
  /// Not written to any output file, so files stay byte-identical per (config, seed).
  double wall_clock_seconds = 0.0;

  bool any_honest_fired(Cause cause) const;
  bool detected() const { return outcome == "C"; }
};

/// Calibrations (if requested), learning, validation, outcome classification.
RunRecord run_experiment(const RunConfig& config);

/// Coordinate-wise median mixing in place of gossip; no validation phase.
RunRecord coordinate_median_baseline(const RunConfig& config);

/// Dispatches on config.baseline.
RunRecord run_config(const RunConfig& config);

std::vector<RoundMetrics> round_metrics(const LearningResult& learning,
                                        const std::vector<bool>& byzantine,
                                        std::span<const double> xstar);

}  // namespace valid
