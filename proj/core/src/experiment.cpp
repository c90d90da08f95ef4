#include "valid/experiment.hpp"

#include <algorithm>
#include <chrono>

#include "valid/calibration.hpp"
#include "valid/errors.hpp"
#include "valid/oracle.hpp"

namespace valid {

namespace {

std::vector<bool> byzantine_mask(const AttackSpec& spec, size_t n) {
  std::vector<bool> mask(n, false);
  if (!spec.active()) return mask;
  for (AgentId b : spec.byzantine) mask.at(b) = true;
  return mask;
}

void fill_common(RunRecord& rec, const RunConfig& config, const PreparedRun& prep) {
  rec.seed = config.seed;
  rec.config_json = to_json(config);
  rec.config_hash = config_hash(config);
  rec.alpha0 = prep.schedule.alpha0;
  rec.eta0 = prep.schedule.eta0;
  rec.delta = prep.delta;
  rec.epsilon = config.epsilon;
  rec.xstar = prep.xstar;
  rec.gamma_bar = prep.schedule.contraction_factor(prep.loss->beta(), prep.loss->mu());
}

}  // namespace

bool RunRecord::any_honest_fired(Cause cause) const {
  return std::any_of(agents.begin(), agents.end(),
                     [&](const AgentRecord& a) { return !a.byzantine && a.state.has_fired(cause); });
}

PreparedRun prepare_run(const RunConfig& config, uint64_t seed) {
  PreparedRun prep;
  prep.graph.emplace(make_graph(config.graph, seed));
  const Graph& g = *prep.graph;
  const size_t n = g.size();
  const AttackSpec& attack = config.attack.spec;

  if (attack.active()) {
    for (AgentId b : attack.byzantine) {
      if (b >= n) throw ConfigError("attack.byzantine", "agent " + std::to_string(b) + " is not in the graph");
    }
    if (!config.allow_assumption_violation && !check_source_component(g, attack.byzantine)) {
      throw ConfigError("attack.byzantine",
                        "honest agents are disconnected without the Byzantine set "
                        "(set allow_assumption_violation to run anyway)");
    }
  }

  const LossModel base = build_loss(config.loss, n);
  LossModel effective = base;
  if (attack.active() && attack.strategy == AttackSpec::Strategy::kBenign) {
    try {
      effective = apply_benign(base, attack);
    } catch (const InvalidParameter& e) {
      throw ConfigError("attack.q_means", e.what());
    }
  }
  prep.xstar = global_minimizer_real(effective);
  prep.delta = config.delta.value_or(heterogeneity(effective, prep.xstar));
  if (attack.active() && attack.strategy == AttackSpec::Strategy::kBenign &&
      !config.allow_assumption_violation) {
    const double actual = heterogeneity(effective, prep.xstar);
    if (actual > prep.delta) {
      throw ConfigError("attack.q_means", "substituted distributions have heterogeneity " +
                                              std::to_string(actual) + " > delta " +
                                              std::to_string(prep.delta));
    }
  }

  prep.schedule.rounds = config.rounds;
  prep.schedule.alpha0 = config.alpha0.value_or(default_alpha0(effective.beta(), effective.mu()));
  prep.schedule.eta0 = config.eta0.value_or(default_eta0(g.max_degree()));
  try {
    prep.schedule.validate(effective.beta(), effective.mu(), g.max_degree());
  } catch (const InvalidParameter& e) {
    const std::string what = e.what();
    throw ConfigError(what.rfind("eta", 0) == 0 ? "eta0" : "alpha0", what);
  }

  prep.loss = std::make_shared<const LossModel>(std::move(effective));
  prep.sources.reserve(n);
  for (AgentId v = 0; v < n; ++v) prep.sources.emplace_back(v, prep.loss, config.batch, seed);
  return prep;
}

std::vector<RoundMetrics> round_metrics(const LearningResult& learning,
                                        const std::vector<bool>& byzantine,
                                        std::span<const double> xstar) {
  std::vector<RoundMetrics> out;
  const size_t T = learning.states.size() - 1;
  const size_t d = xstar.size();
  out.reserve(T);
  for (size_t t = 1; t <= T; ++t) {
    RoundMetrics m;
    m.t = static_cast<int>(t);
    std::vector<double> mean(d, 0.0);
    size_t honest = 0;
    for (size_t v = 0; v < learning.states[t].size(); ++v) {
      if (byzantine[v]) continue;
      ++honest;
      const auto& x = learning.states[t][v];
      m.mse += squared_distance(x, xstar);
      m.grad_norm += learning.gradient_norms[t][v];
      for (size_t i = 0; i < d; ++i) mean[i] += x[i].to_double();
    }
    if (honest > 0) {
      m.mse /= static_cast<double>(honest);
      m.grad_norm /= static_cast<double>(honest);
      for (double& e : mean) e /= static_cast<double>(honest);
      for (size_t v = 0; v < learning.states[t].size(); ++v) {
        if (!byzantine[v]) m.dispersion += squared_distance(learning.states[t][v], mean);
      }
    }
    out.push_back(m);
  }
  return out;
}

RunRecord run_experiment(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  PreparedRun prep = prepare_run(config, config.seed);
  const Graph& g = *prep.graph;
  RunRecord rec;
  rec.mode = "valid";
  fill_common(rec, config, prep);

  ValidationParams params;
  params.epsilon = config.epsilon;
  params.delta = prep.delta;
  params.seed = config.seed;
  params.prime = config.prime;
  if (config.bounds.calibrate) {
    params.bounds = calibrate_bounds(config, config.calibration.runs, config.calibration.margin);
  } else {
    params.bounds.model.assign(static_cast<size_t>(config.rounds) + 1, config.bounds.model);
    params.bounds.gradient.assign(static_cast<size_t>(config.rounds) + 1, config.bounds.gradient);
  }
  if (config.gamma) {
    params.gamma = *config.gamma;
  } else {
    params.gamma = std::min(calibrate_gamma_max(config, config.epsilon, config.calibration.runs),
                            rec.gamma_bar);
  }
  rec.gamma = params.gamma;

  AttackSpec spec = config.attack.spec;
  if (spec.strategy == AttackSpec::Strategy::kGaussian) {
    const double base = config.attack.sigma_strong
                            ? strong_sigma(prep.schedule, params.gamma, g.size(),
                                           prep.loss->dim(), prep.delta, config.epsilon)
                            : spec.sigma;
    spec.sigma = base * config.attack.sigma_scale;
  }
  rec.sigma = spec.sigma;
  const Adversary adv = make_adversary(spec, g, config.seed);

  LearningOptions opts;
  opts.adversary = adv.learning.get();
  const LearningResult learning = run_learning(g, prep.sources, prep.schedule, opts);
  const std::vector<ModelVec>& final_models = learning.states.back();
  const ValidationReport report =
      validate_model(g, learning.transcript, prep.schedule, final_models, params, adv.validation);

  const auto mask = byzantine_mask(spec, g.size());
  rec.rounds = round_metrics(learning, mask, prep.xstar);
  rec.final_mse = rec.rounds.empty() ? 0.0 : rec.rounds.back().mse;
  rec.optimality_statistic = report.optimality_statistic;
  rec.heterogeneity_statistic = report.heterogeneity_statistic;
  for (AgentId v = 0; v < g.size(); ++v) rec.agents.push_back({v, mask[v], report.final_states[v]});

  const OutcomeReport oc = classify_outcome(mask, report.final_states, final_models, *prep.loss,
                                            prep.xstar, prep.delta, config.epsilon);
  rec.outcome = to_string(oc.outcome);
  rec.admissible = oc.admissible;
  if (oc.top_mean) rec.top_mean_distance = squared_distance(*oc.top_mean, prep.xstar);
  rec.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

RunRecord coordinate_median_baseline(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  PreparedRun prep = prepare_run(config, config.seed);
  const Graph& g = *prep.graph;
  RunRecord rec;
  rec.mode = "baseline";
  fill_common(rec, config, prep);

  AttackSpec spec = config.attack.spec;
  if (spec.strategy == AttackSpec::Strategy::kGaussian && config.attack.sigma_strong) {
    throw ConfigError("attack.sigma", "\"strong\" needs the validation gamma; give a number for baselines");
  }
  spec.sigma *= config.attack.sigma_scale;
  rec.sigma = spec.sigma;
  const Adversary adv = make_adversary(spec, g, config.seed);

  LearningOptions opts;
  opts.mixing = MixingRule::kCoordinateMedian;
  opts.record_transcript = false;
  opts.adversary = adv.learning.get();
  const LearningResult learning = run_learning(g, prep.sources, prep.schedule, opts);

  const auto mask = byzantine_mask(spec, g.size());
  rec.rounds = round_metrics(learning, mask, prep.xstar);
  rec.final_mse = rec.rounds.empty() ? 0.0 : rec.rounds.back().mse;
  for (AgentId v = 0; v < g.size(); ++v) rec.agents.push_back({v, mask[v], ValidationState{}});
  rec.outcome = "NA";
  rec.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

RunRecord run_config(const RunConfig& config) {
  return config.baseline == Baseline::kCoordinateMedian ? coordinate_median_baseline(config)
                                                        : run_experiment(config);
}

}  // namespace valid
