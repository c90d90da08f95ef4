#include "valid/loss.hpp"

#include <algorithm>
#include <cmath>

#include "valid/errors.hpp"

namespace valid {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z))); }

void add_logistic_gradient(const LabeledPoint& p, std::span<const double> x, double l2,
                           double weight, std::vector<double>& out) {
  const double margin = p.label * dot(p.features, x);
  const double coeff = -p.label * sigmoid(-margin);
  for (size_t i = 0; i < out.size(); ++i) out[i] += weight * (coeff * p.features[i] + l2 * x[i]);
}

}  // namespace

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kQuadratic: return "quadratic";
    case LossKind::kLogistic: return "logistic";
    case LossKind::kCustom: return "custom";
  }
  return "unknown";
}

LossModel LossModel::quadratic(std::vector<std::vector<double>> means, double sigma_d) {
  if (means.empty()) throw InvalidParameter("quadratic loss needs at least one agent");
  if (!(sigma_d >= 0.0)) throw InvalidParameter("sigma_d must be nonnegative");
  LossModel m;
  m.kind_ = LossKind::kQuadratic;
  m.dim_ = means.front().size();
  if (m.dim_ == 0) throw InvalidParameter("quadratic loss needs dimension >= 1");
  for (auto& mean : means) {
    if (mean.size() != m.dim_) throw InvalidParameter("agent means have differing dimensions");
    m.distributions_.push_back(AgentDistribution{std::move(mean), {}});
  }
  m.beta_ = 1.0;
  m.mu_ = 1.0;
  m.sigma_d_ = sigma_d;
  m.sigma_g_ = sigma_d * std::sqrt(static_cast<double>(m.dim_));
  return m;
}

LossModel LossModel::logistic(std::vector<std::vector<LabeledPoint>> datasets, double l2) {
  if (datasets.empty()) throw InvalidParameter("logistic loss needs at least one agent");
  if (!(l2 > 0.0)) throw InvalidParameter("logistic loss needs l2 > 0 for strong convexity");
  LossModel m;
  m.kind_ = LossKind::kLogistic;
  m.l2_ = l2;
  double max_sq = 0.0;
  for (auto& data : datasets) {
    if (data.empty()) throw InvalidParameter("every agent needs at least one data point");
    for (const auto& p : data) {
      if (m.dim_ == 0) m.dim_ = p.features.size();
      if (p.features.size() != m.dim_ || m.dim_ == 0) {
        throw InvalidParameter("logistic features have inconsistent dimension");
      }
      if (p.label != 1.0 && p.label != -1.0) throw InvalidParameter("labels must be +1 or -1");
      max_sq = std::max(max_sq, dot(p.features, p.features));
    }
    m.distributions_.push_back(AgentDistribution{{}, std::move(data)});
  }
  m.mu_ = l2;
  m.beta_ = l2 + max_sq / 4.0;
  m.sigma_g_ = std::sqrt(max_sq);
  return m;
}

LossModel LossModel::custom(size_t agents, size_t dim, double beta, double mu, double sigma_g,
                            CustomGradient gradient) {
  if (!(mu > 0.0) || !(beta >= mu)) throw InvalidParameter("need beta >= mu > 0");
  if (!gradient) throw InvalidParameter("custom loss needs a gradient callback");
  LossModel m;
  m.kind_ = LossKind::kCustom;
  m.dim_ = dim;
  m.beta_ = beta;
  m.mu_ = mu;
  m.sigma_g_ = sigma_g;
  m.distributions_.resize(agents);
  m.custom_ = std::move(gradient);
  return m;
}

const AgentDistribution& LossModel::distribution(AgentId agent) const {
  if (agent >= distributions_.size()) throw InvalidParameter("agent id out of range");
  return distributions_[agent];
}

LossModel LossModel::with_distribution(AgentId agent, AgentDistribution replacement) const {
  if (agent >= distributions_.size()) throw InvalidParameter("agent id out of range");
  LossModel copy = *this;
  if (kind_ == LossKind::kQuadratic && replacement.mean.size() != dim_) {
    throw InvalidParameter("replacement mean has wrong dimension");
  }
  if (kind_ == LossKind::kLogistic) {
    if (replacement.support.empty()) throw InvalidParameter("replacement support is empty");
    double max_sq = 0.0;
    for (const auto& p : replacement.support) max_sq = std::max(max_sq, dot(p.features, p.features));
    copy.beta_ = std::max(copy.beta_, l2_ + max_sq / 4.0);
  }
  copy.distributions_[agent] = std::move(replacement);
  return copy;
}

void LossModel::require_oracle(const char* what) const {
  if (!has_oracle()) throw UnsupportedOracle(std::string(what) + " requires an analytic oracle");
}

std::vector<double> LossModel::expected_gradient(AgentId agent, std::span<const double> x) const {
  require_oracle("expected_gradient");
  const auto& dist = distribution(agent);
  std::vector<double> g(dim_, 0.0);
  if (kind_ == LossKind::kQuadratic) {
    for (size_t i = 0; i < dim_; ++i) g[i] = x[i] - dist.mean[i];
    return g;
  }
  const double w = 1.0 / static_cast<double>(dist.support.size());
  for (const auto& p : dist.support) add_logistic_gradient(p, x, l2_, w, g);
  return g;
}

double LossModel::expected_loss(AgentId agent, std::span<const double> x) const {
  require_oracle("expected_loss");
  const auto& dist = distribution(agent);
  if (kind_ == LossKind::kQuadratic) {
    double sq = 0.0;
    for (size_t i = 0; i < dim_; ++i) sq += (x[i] - dist.mean[i]) * (x[i] - dist.mean[i]);
    return 0.5 * (sq + sigma_d_ * sigma_d_ * static_cast<double>(dim_));
  }
  double acc = 0.0;
  for (const auto& p : dist.support) acc += softplus(-p.label * dot(p.features, x));
  return acc / static_cast<double>(dist.support.size()) + 0.5 * l2_ * dot(x, x);
}

std::vector<double> LossModel::sample_gradient(AgentId agent, std::span<const double> x,
                                               CounterRng& rng, size_t batch) const {
  if (batch == 0) throw InvalidParameter("mini-batch size must be positive");
  if (x.size() != dim_) throw InvalidParameter("model dimension does not match loss dimension");
  if (kind_ == LossKind::kCustom) return custom_(agent, x, rng, batch);
  const auto& dist = distribution(agent);
  std::vector<double> g(dim_, 0.0);
  const double w = 1.0 / static_cast<double>(batch);
  if (kind_ == LossKind::kQuadratic) {
    // grad = x - mean_k(D_k), D_k = mean + sigma_d * z_k
    std::vector<double> noise(dim_, 0.0);
    for (size_t k = 0; k < batch; ++k) {
      for (size_t i = 0; i < dim_; ++i) noise[i] += rng.normal();
    }
    for (size_t i = 0; i < dim_; ++i) g[i] = x[i] - dist.mean[i] - sigma_d_ * noise[i] * w;
    return g;
  }
  for (size_t k = 0; k < batch; ++k) {
    const auto& p = dist.support[rng.uniform_below(dist.support.size())];
    add_logistic_gradient(p, x, l2_, w, g);
  }
  return g;
}

LossModel make_synthetic_logistic(const std::vector<std::vector<double>>& centers,
                                  std::span<const double> truth, size_t points, double spread,
                                  double l2, uint64_t data_seed) {
  if (points == 0) throw InvalidParameter("need at least one point per agent");
  std::vector<std::vector<LabeledPoint>> datasets;
  datasets.reserve(centers.size());
  for (size_t v = 0; v < centers.size(); ++v) {
    if (centers[v].size() != truth.size()) throw InvalidParameter("center/truth dimension mismatch");
    CounterRng rng(data_seed, v, 0, StreamPurpose::kDataset);
    std::vector<LabeledPoint> data;
    data.reserve(points);
    for (size_t k = 0; k < points; ++k) {
      LabeledPoint p;
      p.features.resize(truth.size());
      for (size_t i = 0; i < truth.size(); ++i) p.features[i] = centers[v][i] + spread * rng.normal();
      p.label = rng.uniform01() < sigmoid(dot(p.features, truth)) ? 1.0 : -1.0;
      data.push_back(std::move(p));
    }
    datasets.push_back(std::move(data));
  }
  return LossModel::logistic(std::move(datasets), l2);
}

AgentDataSource::AgentDataSource(AgentId agent, std::shared_ptr<const LossModel> loss,
                                 size_t batch_size, uint64_t seed)
    : agent_(agent), loss_(std::move(loss)), batch_size_(batch_size), seed_(seed) {
  if (!loss_) throw InvalidParameter("data source needs a loss model");
  if (agent_ >= loss_->agents()) throw InvalidParameter("data source agent out of range");
  if (batch_size_ == 0) throw InvalidParameter("mini-batch size must be positive");
}

ModelVec AgentDataSource::stochastic_gradient(const ModelVec& x, int round) const {
  if (round < 1) throw InvalidParameter("stochastic_gradient needs round >= 1");
  CounterRng rng(seed_, agent_, static_cast<uint64_t>(round), StreamPurpose::kMinibatch);
  const auto xd = x.to_doubles();
  const auto g = loss_->sample_gradient(agent_, xd, rng, batch_size_);
  return ModelVec::from_doubles(g);
}

}  // namespace valid
