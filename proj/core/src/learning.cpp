#include "valid/learning.hpp"

#include <algorithm>

#include "valid/errors.hpp"

namespace valid {

ModelVec mix_step(const ModelVec& x_v, std::span<const ModelVec> neighbors, Fixed eta) {
  const ModelVec own = x_v.scaled(eta);
  ModelVec y = x_v;
  for (const auto& x_u : neighbors) {
    y += x_u.scaled(eta);
    y -= own;
  }
  return y;
}

ModelVec sgd_step(const ModelVec& y, const ModelVec& g, Fixed alpha) { return y - g.scaled(alpha); }

ModelVec coordinate_median(std::span<const ModelVec> values) {
  if (values.empty()) throw InvalidParameter("median of an empty set");
  const size_t d = values.front().dim();
  ModelVec out(d);
  std::vector<int64_t> column(values.size());
  for (size_t i = 0; i < d; ++i) {
    for (size_t k = 0; k < values.size(); ++k) column[k] = values[k][i].raw();
    std::sort(column.begin(), column.end());
    const size_t mid = column.size() / 2;
    if (column.size() % 2 == 1) {
      out[i] = Fixed::from_raw(column[mid]);
    } else {
      const __int128 sum = static_cast<__int128>(column[mid - 1]) + column[mid];
      out[i] = Fixed::from_raw(round_shift_half_even(sum, 1));
    }
  }
  return out;
}

LearningResult run_learning(const Graph& graph, std::span<const AgentDataSource> sources,
                            const StepSchedule& schedule, const LearningOptions& options) {
  const size_t n = graph.size();
  const int T = schedule.rounds;
  if (T < 1) throw InvalidParameter("learning needs T >= 1");
  if (sources.size() != n) throw InvalidParameter("need one data source per agent");
  const size_t d = sources.front().loss().dim();
  const LearningAdversary* adv = options.adversary;

  LearningResult result;
  if (options.record_transcript) {
    result.transcript = EdgeTranscript(graph.directed_edge_count(), d, T);
  }
  result.states.assign(static_cast<size_t>(T) + 1, std::vector<ModelVec>(n, ModelVec(d)));
  result.gradient_norms.assign(static_cast<size_t>(T) + 1, std::vector<double>(n, 0.0));

  // inbox[e] is what the source of directed edge e sent in the previous round.
  std::vector<ModelVec> inbox(graph.directed_edge_count(), ModelVec(d));
  std::vector<ModelVec> next_inbox(inbox.size());
  std::vector<ModelVec> gathered;

  for (int t = 1; t <= T; ++t) {
    const Fixed eta = schedule.eta_fixed(t);
    const Fixed alpha = schedule.alpha_fixed(t);
    const auto& prev = result.states[static_cast<size_t>(t) - 1];
    auto& next = result.states[static_cast<size_t>(t)];
    std::vector<ModelVec> mixed(n);
    std::vector<ModelVec> grads(n);

    for (AgentId v = 0; v < n; ++v) {
      gathered.clear();
      for (AgentId u : graph.neighbors(v)) gathered.push_back(inbox[graph.directed_index(u, v)]);
      if (options.mixing == MixingRule::kGossip) {
        mixed[v] = mix_step(prev[v], gathered, eta);
      } else {
        gathered.push_back(prev[v]);
        mixed[v] = coordinate_median(gathered);
      }
      grads[v] = sources[v].stochastic_gradient(mixed[v], t);
      next[v] = sgd_step(mixed[v], grads[v], alpha);
      result.gradient_norms[static_cast<size_t>(t)][v] = grads[v].norm();
    }
    if (options.perturb) options.perturb(t, next);

    for (AgentId v = 0; v < n; ++v) {
      const auto& nbrs = graph.neighbors(v);
      const size_t base = graph.out_offset(v);
      if (adv != nullptr && adv->controls(v)) {
        const ByzantineRoundView view{t,         v,          graph,   schedule,
                                      prev[v],   mixed[v],   grads[v], next[v],
                                      options.record_transcript ? &result.transcript : nullptr};
        ByzantineAction action = adv->act(view);
        if (action.out.size() != nbrs.size()) {
          throw InvalidParameter("adversary must send one message per neighbor");
        }
        next[v] = std::move(action.state);
        for (size_t k = 0; k < nbrs.size(); ++k) {
          next_inbox[base + k] = action.out[k].x;
          if (options.record_transcript) {
            result.transcript.record(base + k, t, action.out[k].x, action.out[k].g);
          }
        }
        continue;
      }
      for (size_t k = 0; k < nbrs.size(); ++k) {
        next_inbox[base + k] = next[v];
        if (options.record_transcript) result.transcript.record(base + k, t, next[v], grads[v]);
      }
    }
    std::swap(inbox, next_inbox);
  }
  return result;
}

}  // namespace valid
