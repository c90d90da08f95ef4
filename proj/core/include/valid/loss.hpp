#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "valid/model_vec.hpp"
#include "valid/rng.hpp"
#include "valid/types.hpp"

namespace valid {

enum class LossKind { kQuadratic, kLogistic, kCustom };

const char* to_string(LossKind kind);

struct LabeledPoint {
  std::vector<double> features;
  double label = 1.0;  // +1 or -1
};

/// Data distribution P_v of one agent.
///
/// quadratic: D ~ Normal(mean, sigma_d^2 I), f(x, D) = 0.5 * |x - D|^2.
/// logistic:  D uniform over `support`,
///            f(x, (a, b)) = log(1 + exp(-b <a, x>)) + 0.5 * l2 * |x|^2.
struct AgentDistribution {
  std::vector<double> mean;
  std::vector<LabeledPoint> support;
};

/// Loss family together with every agent's data distribution.
class LossModel {
 public:
  using CustomGradient = std::function<std::vector<double>(
      AgentId agent, std::span<const double> x, CounterRng& rng, size_t batch)>;

  static LossModel quadratic(std::vector<std::vector<double>> means, double sigma_d);
  static LossModel logistic(std::vector<std::vector<LabeledPoint>> datasets, double l2);
  /// A loss known only through a stochastic gradient; no analytic oracle.
  static LossModel custom(size_t agents, size_t dim, double beta, double mu,
                          double sigma_g, CustomGradient gradient);

  LossKind kind() const { return kind_; }
  size_t dim() const { return dim_; }
  size_t agents() const { return distributions_.size(); }
  double beta() const { return beta_; }
  double mu() const { return mu_; }
  double sigma_d() const { return sigma_d_; }
  double l2() const { return l2_; }
  /// Per-sample gradient standard deviation bound.
  double sigma_g() const { return sigma_g_; }
  bool has_oracle() const { return kind_ != LossKind::kCustom; }

  const AgentDistribution& distribution(AgentId agent) const;
  /// Copy with agent's distribution replaced (Q_v in the benign attack).
  LossModel with_distribution(AgentId agent, AgentDistribution replacement) const;

  std::vector<double> expected_gradient(AgentId agent, std::span<const double> x) const;
  double expected_loss(AgentId agent, std::span<const double> x) const;
  /// Mean of `batch` per-sample gradients drawn from `rng`.
  std::vector<double> sample_gradient(AgentId agent, std::span<const double> x, CounterRng& rng,
                                      size_t batch) const;

 private:
  LossModel() = default;
  void require_oracle(const char* what) const;

  LossKind kind_ = LossKind::kQuadratic;
  size_t dim_ = 0;
  double beta_ = 1.0;
  double mu_ = 1.0;
  double sigma_d_ = 0.0;
  double sigma_g_ = 0.0;
  double l2_ = 0.0;
  std::vector<AgentDistribution> distributions_;
  CustomGradient custom_;
};

/// Deterministic synthetic logistic datasets: agent v gets `points` features
/// drawn around centers[v] with labels from a logistic link on `truth`.
LossModel make_synthetic_logistic(const std::vector<std::vector<double>>& centers,
                                  std::span<const double> truth, size_t points, double spread,
                                  double l2, uint64_t data_seed);

/// Agent v's mini-batch sampler. Round t draws from the stream keyed by
/// (seed, v, t), so the same triple always yields the same mini-batch.
class AgentDataSource {
 public:
  AgentDataSource(AgentId agent, std::shared_ptr<const LossModel> loss, size_t batch_size,
                  uint64_t seed);

  AgentId agent() const { return agent_; }
  size_t batch_size() const { return batch_size_; }
  uint64_t seed() const { return seed_; }
  const LossModel& loss() const { return *loss_; }
  const std::shared_ptr<const LossModel>& loss_ptr() const { return loss_; }

  ModelVec stochastic_gradient(const ModelVec& x, int round) const;

 private:
  AgentId agent_;
  std::shared_ptr<const LossModel> loss_;
  size_t batch_size_;
  uint64_t seed_;
};

}  // namespace valid
