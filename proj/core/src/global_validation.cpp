#include <algorithm>
#include <cmath>

#include "valid/errors.hpp"
#include "valid/validation.hpp"

namespace valid {

namespace {

Payload encode(const Graph& graph, AgentId v, const std::vector<GradientEstimate>& estimates) {
  Payload p;
  for (AgentId u : graph.neighbors(v)) {
    const auto& est = estimates[graph.directed_index(u, v)];
    for (Fixed e : est.g_hat.entries()) p.push_back(static_cast<uint64_t>(e.raw()));
    p.push_back(static_cast<uint64_t>(est.ell_hat.raw()));
  }
  return p;
}

bool decode(const Payload* p, size_t pos, size_t dim, GradientEstimate& out) {
  const size_t width = dim + 1;
  if (p == nullptr || p->size() < (pos + 1) * width) return false;
  std::vector<int64_t> raw(dim);
  for (size_t i = 0; i < dim; ++i) raw[i] = static_cast<int64_t>((*p)[pos * width + i]);
  out.g_hat = ModelVec::from_raw(raw);
  out.ell_hat = Fixed::from_raw(static_cast<int64_t>((*p)[pos * width + dim]));
  return true;
}

}  // namespace

std::vector<double> estimation_weights(double gamma, int T) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidParameter("gamma must lie in [0, 1)");
  if (T < 2) throw InvalidParameter("gradient estimation needs T >= 2");
  std::vector<double> w(static_cast<size_t>(T - 1));
  const double norm = 1.0 - std::pow(gamma, T - 1);
  for (int i = 1; i <= T - 1; ++i) {
    const int k = T - i - 1;
    const double g = k == 0 ? 1.0 : std::pow(gamma, k);
    w[static_cast<size_t>(i - 1)] = g * (1.0 - gamma) / norm;
  }
  return w;
}

std::vector<GradientEstimate> estimate_final_gradients(const EdgeTranscript& tr, double gamma) {
  const auto w = estimation_weights(gamma, tr.rounds());
  const size_t d = tr.dim();
  std::vector<GradientEstimate> out;
  out.reserve(tr.edges());
  std::vector<double> acc(d);
  for (size_t e = 0; e < tr.edges(); ++e) {
    std::fill(acc.begin(), acc.end(), 0.0);
    double ell = 0.0;
    for (int i = 1; i < tr.rounds(); ++i) {
      const double wi = w[static_cast<size_t>(i - 1)];
      if (wi == 0.0) continue;
      const ModelVec g = tr.g_vec(e, i);
      for (size_t k = 0; k < d; ++k) acc[k] += wi * g[k].to_double();
      ell += wi * g.norm();
    }
    out.push_back({ModelVec::from_doubles(acc), Fixed::from_double(ell)});
  }
  return out;
}

double optimality_statistic(const std::vector<GradientEstimate>& agreed) {
  if (agreed.empty()) return 0.0;
  const size_t d = agreed.front().g_hat.dim();
  std::vector<double> mean(d, 0.0);
  for (const auto& est : agreed) {
    for (size_t k = 0; k < d; ++k) mean[k] += est.g_hat[k].to_double();
  }
  double sq = 0.0;
  for (double m : mean) sq += (m / static_cast<double>(agreed.size())) * (m / static_cast<double>(agreed.size()));
  return std::sqrt(sq);
}

double heterogeneity_statistic(const std::vector<GradientEstimate>& agreed) {
  if (agreed.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& est : agreed) acc += est.ell_hat.to_double() * est.ell_hat.to_double();
  return acc / static_cast<double>(agreed.size());
}

GlobalValidationResult global_validate(const Graph& graph,
                                       const std::vector<GradientEstimate>& estimates,
                                       double delta, double epsilon,
                                       const ValidationBehavior& behavior) {
  const size_t n = graph.size();
  if (estimates.size() != graph.directed_edge_count()) {
    throw InvalidParameter("need one estimate per directed edge");
  }
  const size_t d = estimates.empty() ? 0 : estimates.front().g_hat.dim();
  GlobalValidationResult res;
  res.states.resize(n);

  const BroadcastBehavior bb = behavior.broadcast();
  std::vector<BroadcastResult> received;
  received.reserve(n);
  for (AgentId v = 0; v < n; ++v) {
    received.push_back(
        validated_broadcast(graph, v, std::make_shared<const Payload>(encode(graph, v, estimates)), bb));
    for (AgentId w = 0; w < n; ++w) {
      if (received.back().flagged[w] && !behavior.is_byzantine(w)) {
        res.states[w].raise(Cause::kBroadcastConflict);
      }
    }
  }

  bool reported = false;
  for (AgentId w = 0; w < n; ++w) {
    if (behavior.is_byzantine(w)) continue;
    std::vector<GradientEstimate> agreed(n, GradientEstimate{ModelVec(d), Fixed()});
    bool consistent = true;
    for (AgentId u = 0; u < n; ++u) {
      bool first = true;
      for (AgentId v : graph.neighbors(u)) {
        const auto& nv = graph.neighbors(v);
        const size_t pos = static_cast<size_t>(std::lower_bound(nv.begin(), nv.end(), u) - nv.begin());
        const Slot& s = received[v].held[w];
        GradientEstimate est;
        if (!decode(s.is_value() ? s.value.get() : nullptr, pos, d, est)) {
          consistent = false;
          continue;
        }
        if (first) {
          agreed[u] = std::move(est);
          first = false;
        } else if (!(est == agreed[u])) {
          consistent = false;
        }
      }
    }
    if (!consistent) res.states[w].raise(Cause::kConsistencyCheck);
    const double opt = optimality_statistic(agreed);
    const double het = heterogeneity_statistic(agreed);
    if (opt > epsilon) res.states[w].raise(Cause::kOptimalityCheck);
    if (het > delta + epsilon) res.states[w].raise(Cause::kHeterogeneityCheck);
    if (!reported) {
      res.agreed = std::move(agreed);
      res.optimality_statistic = opt;
      res.heterogeneity_statistic = het;
      reported = true;
    }
  }
  return res;
}

}  // namespace valid
