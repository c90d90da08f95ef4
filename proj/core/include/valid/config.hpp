#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "valid/adversary.hpp"
#include "valid/field.hpp"
#include "valid/graph.hpp"
#include "valid/loss.hpp"

namespace valid {

/// Loss family and per-agent distributions.
///
/// Means (quadratic) or feature centers (logistic) are given in one of three
/// layouts: `mean` shared by everyone, `means` one per agent, or
/// `group_means` with k entries where agent v gets entry floor(v k / n).
struct LossSpec {
  enum class Layout { kShared, kPerAgent, kGroups };

  LossKind kind = LossKind::kQuadratic;
  Layout layout = Layout::kShared;
  std::vector<std::vector<double>> means{{0.0}};
  double sigma_d = 1.0;
  // logistic only
  std::vector<double> truth;
  size_t points = 50;
  double spread = 1.0;
  double l2 = 0.1;
  uint64_t data_seed = 1;
};

struct BoundsSpec {
  bool calibrate = true;
  double model = 0.0;
  double gradient = 0.0;
};

struct CalibrationSpec {
  int runs = 5;
  double margin = 2.0;
  uint64_t seed = 1000003;
};

struct AttackConfig {
  AttackSpec spec;
  /// sigma = strong_sigma(...) instead of spec.sigma.
  bool sigma_strong = false;
  double sigma_scale = 1.0;
};

enum class Baseline { kNone, kCoordinateMedian };

const char* to_string(Baseline baseline);

struct RunConfig {
  uint64_t seed = 1;
  GraphSpec graph;
  LossSpec loss;
  size_t batch = 10;
  int rounds = 1000;
  std::optional<double> alpha0;  // nullopt: derived from (beta, mu)
  std::optional<double> eta0;    // nullopt: derived from the max degree
  std::optional<double> gamma;   // nullopt: calibrated
  double epsilon = 0.25;
  std::optional<double> delta;   // nullopt: oracle heterogeneity
  BoundsSpec bounds;
  CalibrationSpec calibration;
  AttackConfig attack;
  Baseline baseline = Baseline::kNone;
  uint64_t prime = kMersenne61;
  bool allow_assumption_violation = false;
};

/// Parses a JSON document. Missing fields take the defaults above; unknown
/// fields and ill-typed values throw ConfigError naming the field path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical JSON (sorted keys, every default written out).
std::string to_json(const RunConfig& config);

/// FNV-1a 64 of the canonical JSON with the seed removed, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Same config without attack or baseline, for calibration.
RunConfig honest_config(const RunConfig& config);

/// Replaces the value at a dotted path ("attack.sigma") in a JSON document
/// with a JSON literal and returns the new document text.
std::string set_config_field(const std::string& text, const std::string& path,
                             const std::string& json_value);

/// Agent distributions for n agents.
LossModel build_loss(const LossSpec& spec, size_t agents);

}  // namespace valid
