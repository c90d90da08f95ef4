// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Tolerances are the constants at the top of each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "valid/adversary.hpp"
#include "valid/broadcast.hpp"
#include "valid/calibration.hpp"
#include "valid/config.hpp"
#include "valid/errors.hpp"
#include "valid/experiment.hpp"
#include "valid/field.hpp"
#include "valid/learning.hpp"
#include "valid/metrics.hpp"
#include "valid/poly_hash.hpp"
#include "valid/rng.hpp"

#ifndef VALID_CONFIG_DIR
#error "VALID_CONFIG_DIR must point at the configs directory"
#endif

namespace fs = std::filesystem;
using namespace valid;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RunConfig config_file(const char* name) { return load_config(std::string(VALID_CONFIG_DIR) + "/" + name); }

std::vector<uint64_t> seed_range(uint64_t first, size_t count) {
  std::vector<uint64_t> out(count);
  for (size_t i = 0; i < count; ++i) out[i] = first + i;
  return out;
}

// A run that cannot even be set up (for example a seed whose graph violates
// the connectivity assumption) is reported with outcome "ERROR".
RunRecord run_or_error(RunConfig c, uint64_t seed) {
  c.seed = seed;
  try {
    return run_config(c);
  } catch (const Error& e) {
    RunRecord r;
    r.seed = seed;
    r.outcome = "ERROR";
    std::fprintf(stderr, "seed %llu: %s\n", static_cast<unsigned long long>(seed), e.what());
    return r;
  }
}

bool all_honest(const RunRecord& r, const std::function<bool(const ValidationState&)>& pred) {
  return std::all_of(r.agents.begin(), r.agents.end(),
                     [&](const AgentRecord& a) { return a.byzantine || pred(a.state); });
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void convergence() {
  constexpr double kMaxRatio = 0.7;
  constexpr double kMaxSeconds = 120.0;
  const RunConfig base = config_file("two_clique_honest.json");
  const std::vector<int> horizons{250, 500, 1000, 2000};
  const auto seeds = seed_range(1, 10);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> err;
  bool ok = true;
  for (int T : horizons) {
    RunConfig c = base;
    c.rounds = T;
    double sum = 0.0;
    for (uint64_t s : seeds) {
      const RunRecord r = run_or_error(c, s);
      ok &= r.outcome != "ERROR";
      sum += r.final_mse;
    }
    err.push_back(sum / static_cast<double>(seeds.size()));
  }
  const double secs = seconds_since(t0);
  std::string detail = "mean error";
  for (size_t i = 0; i < err.size(); ++i) {
    detail += " T=" + std::to_string(horizons[i]) + ":" + fmt("%.4f", err[i]);
  }
  detail += "; ratios";
  for (size_t i = 1; i < err.size(); ++i) {
    const double ratio = err[i] / err[i - 1];
    ok &= ratio <= kMaxRatio;
    detail += fmt(" %.3f", ratio);
  }
  ok &= secs < kMaxSeconds;
  detail += fmt("; runtime %.1f s", secs);
  report(1, "O(1/T) convergence", ok, detail);
}

void completeness() {
  const RunConfig c = config_file("two_clique_honest.json");
  size_t a = 0;
  size_t all_top = 0;
  std::set<std::string> seen;
  for (uint64_t s : seed_range(101, 50)) {
    const RunRecord r = run_or_error(c, s);
    a += r.outcome == "A";
    all_top += !r.agents.empty() && all_honest(r, [](const ValidationState& st) { return st.top(); });
    seen.insert(r.outcome);
  }
  std::string outcomes;
  for (const auto& o : seen) outcomes += o + " ";
  report(2, "completeness", a == 50 && all_top == 50,
         std::to_string(a) + "/50 outcome A, " + std::to_string(all_top) + "/50 all TOP (outcomes seen: " +
             outcomes + ")");
}

void equivocation() {
  constexpr double kMaxFalseNegative = 1e-12;
  RunConfig c = config_file("equivocate.json");
  const size_t n = 20;
  const size_t d = c.loss.means.front().size();
  const double bound = static_cast<double>(d) * c.rounds * static_cast<double>(n) /
                       static_cast<double>(c.prime);
  size_t detected = 0;
  size_t by_hash = 0;
  for (uint64_t s : seed_range(201, 50)) {
    // One equivocation round per seed, spread over the whole horizon.
    c.attack.spec.rounds = {1 + static_cast<int>((s * 7919) % static_cast<uint64_t>(c.rounds))};
    const RunRecord r = run_or_error(c, s);
    detected += r.outcome == "C";
    by_hash += r.outcome == "C" &&
               all_honest(r, [](const ValidationState& st) { return st.has_fired(Cause::kHashInconsistency); });
  }
  const bool ok = detected == 50 && by_hash == 50 && bound < kMaxFalseNegative;
  report(3, "equivocation soundness", ok,
         std::to_string(detected) + "/50 outcome C, " + std::to_string(by_hash) +
             "/50 with hash_inconsistency at every honest agent; dT|V|/p = " + fmt("%.3g", bound));
}

bool global_check_fired(const ValidationState& st) {
  return st.has_fired(Cause::kHeterogeneityCheck) || st.has_fired(Cause::kOptimalityCheck);
}

struct Rates {
  double detected = 0.0;  // outcome C
  double global = 0.0;    // outcome C and a global check fired at every honest agent
};

Rates detection_rates(const RunConfig& c, const std::vector<uint64_t>& seeds) {
  Rates out;
  for (uint64_t s : seeds) {
    const RunRecord r = run_or_error(c, s);
    const bool det = r.outcome == "C";
    out.detected += det;
    out.global += det && all_honest(r, global_check_fired);
  }
  out.detected /= static_cast<double>(seeds.size());
  out.global /= static_cast<double>(seeds.size());
  return out;
}

void gaussian_detection() {
  constexpr double kMinRate = 0.95;
  const RunConfig c = config_file("gaussian_attack.json");

  // gamma_max and sigma_strong as resolved by the harness for this config.
  const RunRecord probe = run_or_error(c, 301);
  const double gamma = probe.gamma;
  const double sigma = probe.sigma;

  const Rates main = detection_rates(c, seed_range(301, 50));
  bool ok = main.global >= kMinRate;
  std::string detail = "gamma=" + fmt("%.6f", gamma) + " sigma_strong=" + fmt("%.4g", sigma) +
                       ": detection " + fmt("%.2f", main.global) + " via global checks (" +
                       fmt("%.2f", main.detected) + " any cause)";

  const auto sweep_seeds = seed_range(401, 20);
  detail += "; sigma sweep";
  double prev = -1.0;
  for (double scale : {0.0, 0.1, 1.0}) {
    RunConfig v = c;
    v.attack.sigma_scale = scale;
    const Rates r = detection_rates(v, sweep_seeds);
    ok &= r.detected >= prev;
    prev = r.detected;
    detail += " " + fmt("%.2g", scale * sigma) + ":" + fmt("%.2f", r.detected) + "/" + fmt("%.2f", r.global);
  }
  detail += "; gamma sweep at fixed sigma";
  prev = -1.0;
  for (double g : {0.0, gamma / 2.0, gamma}) {
    RunConfig v = c;
    v.gamma = g;
    v.attack.sigma_strong = false;
    v.attack.spec.sigma = sigma;
    const Rates r = detection_rates(v, sweep_seeds);
    ok &= r.detected >= prev;
    prev = r.detected;
    detail += " " + fmt("%.4f", g) + ":" + fmt("%.2f", r.detected) + "/" + fmt("%.2f", r.global);
  }
  detail += " (rate as C / C via global check)";
  report(4, "Gaussian-attack detection", ok, detail);
}

void benign_admissibility() {
  constexpr size_t kMinB = 48;
  const RunConfig c = config_file("benign_attack.json");
  const double eps = 10.0 / c.rounds;
  bool ok = std::fabs(c.epsilon - eps) < 1e-15;

  // x*(P_H x Q_B) by hand: mean of the honest means and the substituted one.
  const size_t n = 20;
  std::vector<double> xstar(c.loss.means.front().size(), 0.0);
  for (AgentId v = 0; v < n; ++v) {
    const bool byz = std::find(c.attack.spec.byzantine.begin(), c.attack.spec.byzantine.end(), v) !=
                     c.attack.spec.byzantine.end();
    const auto& m = byz ? c.attack.spec.q_means.front() : c.loss.means.front();
    for (size_t i = 0; i < xstar.size(); ++i) xstar[i] += m[i] / static_cast<double>(n);
  }

  size_t b = 0;
  size_t good = 0;
  double worst = 0.0;
  for (uint64_t s : seed_range(501, 50)) {
    const RunRecord r = run_or_error(c, s);
    if (r.outcome != "B") continue;
    ++b;
    bool same_xstar = r.xstar.size() == xstar.size();
    for (size_t i = 0; same_xstar && i < xstar.size(); ++i) same_xstar = std::fabs(r.xstar[i] - xstar[i]) < 1e-12;
    const double dist = r.top_mean_distance.value_or(INFINITY);
    worst = std::max(worst, dist);
    good += same_xstar && r.admissible.value_or(false) && dist < eps;
  }
  ok &= b >= kMinB && good == b;
  report(5, "benign-attack admissibility", ok,
         std::to_string(b) + "/50 outcome B, " + std::to_string(good) +
             " of them admissible and within eps=" + fmt("%.3g", eps) + " of x* (worst squared distance " +
             fmt("%.3g", worst) + ")");
}

void hash_properties() {
  const PrimeField f;
  CounterRng rng(derive_key({6, 1}));
  size_t linear = 0;
  for (int k = 0; k < 1000; ++k) {
    const size_t len = 1 + rng.uniform_below(64);
    std::vector<int64_t> a(len);
    std::vector<int64_t> b(len);
    std::vector<int64_t> sum(len);
    for (size_t i = 0; i < len; ++i) {
      a[i] = static_cast<int64_t>(rng() >> 2) - (int64_t{1} << 61);
      b[i] = static_cast<int64_t>(rng() >> 2) - (int64_t{1} << 61);
      sum[i] = a[i] + b[i];
    }
    const uint64_t s = rng.uniform_below(kMersenne61);
    linear += f.add(poly_hash(f, s, a), poly_hash(f, s, b)) == poly_hash(f, s, sum);
  }

  const RunConfig c = config_file("two_clique_honest.json");
  size_t checks = 0;
  size_t exact = 0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const PreparedRun prep = prepare_run(c, seed);
    const Graph& g = *prep.graph;
    const auto res = run_learning(g, prep.sources, prep.schedule);
    std::vector<EdgeViews> views;
    for (size_t e = 0; e < g.directed_edge_count(); ++e) views.push_back(edge_views(res.transcript, prep.schedule, e));
    for (int k = 0; k < 100; ++k) {
      const uint64_t key = rng.uniform_below(kMersenne61);
      std::vector<ViewHashes> h;
      for (const auto& v : views) h.push_back(hash_views(f, key, v));
      for (AgentId v = 0; v < g.size(); ++v) {
        const ViewHashes& own = h[g.out_offset(v)];
        uint64_t rhs = own[1];
        for (AgentId u : g.neighbors(v)) rhs = f.add(rhs, f.sub(h[g.directed_index(u, v)][2], own[2]));
        rhs = f.sub(rhs, own[3]);
        ++checks;
        exact += rhs == own[0];
      }
    }
  }
  report(6, "hash properties", linear == 1000 && exact == checks,
         "linearity " + std::to_string(linear) + "/1000; update identity " + std::to_string(exact) + "/" +
             std::to_string(checks) + " (10 runs x 100 keys x 20 agents)");
}

// Exhaustive search over every per-round, per-neighbor choice of one
// Byzantine relay. Reachable states after each round are deduplicated, which
// is exact because honest behavior depends only on the current state.
struct SearchStats {
  size_t graphs = 0;
  size_t placements = 0;
  size_t final_states = 0;
  size_t violations = 0;
  // Placements where the relay is a cut vertex: agents behind it have no
  // second path, so no flood rule can tell them the value was altered.
  size_t cut_placements = 0;
  size_t cut_violating = 0;
};

std::string state_key(const BroadcastRun& run) {
  std::string key;
  for (size_t v = 0; v < run.held().size(); ++v) {
    const Slot& s = run.held()[v];
    key.push_back(static_cast<char>('a' + (s.is_value() ? 1 + static_cast<int>((*s.value)[0]) : 0)));
    key.push_back(run.flagged()[v] ? '!' : '.');
  }
  return key;
}

void search_placement(const Graph& g, AgentId source, AgentId byz, bool cut, SearchStats& stats) {
  std::vector<Slot> alphabet{Slot::empty(), Slot::conflict()};
  for (uint64_t m = 0; m < 3; ++m) alphabet.push_back(Slot::of(std::make_shared<const Payload>(Payload{m})));
  const PayloadPtr original = std::make_shared<const Payload>(Payload{0});

  BroadcastBehavior b;
  b.byzantine.assign(g.size(), false);
  b.byzantine[byz] = true;
  std::vector<BroadcastRun> frontier{BroadcastRun(g, source, original, b)};
  const auto& nbrs = g.neighbors(byz);
  size_t combos = 1;
  for (size_t k = 0; k < nbrs.size(); ++k) combos *= alphabet.size();

  for (size_t r = 1; r <= broadcast_rounds(g); ++r) {
    std::vector<BroadcastRun> next;
    std::set<std::string> seen;
    for (const auto& state : frontier) {
      for (size_t c = 0; c < combos; ++c) {
        std::vector<size_t> pick(nbrs.size());
        size_t rest = c;
        for (auto& p : pick) {
          p = rest % alphabet.size();
          rest /= alphabet.size();
        }
        const RelayFn relay = [&](size_t, AgentId, AgentId to, const Slot&) {
          const size_t k = static_cast<size_t>(std::lower_bound(nbrs.begin(), nbrs.end(), to) - nbrs.begin());
          return alphabet[pick[k]];
        };
        BroadcastRun copy = state;
        copy.step(r, relay);
        if (seen.insert(state_key(copy)).second) next.push_back(std::move(copy));
      }
    }
    frontier = std::move(next);
  }
  size_t bad = 0;
  for (const auto& state : frontier) {
    const BroadcastResult res = state.finish();
    for (AgentId v = 0; v < g.size(); ++v) {
      if (v == byz) continue;
      const bool holds = res.held[v].is_value() && same_payload(res.held[v].value, original);
      bad += !(holds || res.flagged[v]);
    }
  }
  if (cut) {
    ++stats.cut_placements;
    stats.cut_violating += bad > 0;
    return;
  }
  stats.final_states += frontier.size();
  stats.violations += bad;
  ++stats.placements;
}

void broadcast_agreement() {
  SearchStats stats;
  for (size_t n = 2; n <= 5; ++n) {
    std::vector<Graph::Edge> all;
    for (AgentId u = 0; u < n; ++u) {
      for (AgentId v = u + 1; v < n; ++v) all.emplace_back(u, v);
    }
    for (uint64_t mask = 0; mask < (uint64_t{1} << all.size()); ++mask) {
      std::vector<Graph::Edge> edges;
      for (size_t i = 0; i < all.size(); ++i) {
        if ((mask >> i) & 1) edges.push_back(all[i]);
      }
      if (!connected_without(n, edges, {})) continue;
      const Graph g(n, edges);
      ++stats.graphs;
      // Labels range over all graphs, so source 0 with each relay position
      // covers every (graph, source, relay) placement up to relabeling.
      for (AgentId byz = 1; byz < n; ++byz) {
        search_placement(g, 0, byz, !check_source_component(g, {byz}), stats);
      }
    }
  }
  report(7, "broadcast agreement",
         stats.violations == 0 && stats.graphs == 1 + 4 + 38 + 728 && stats.placements > 0,
         std::to_string(stats.graphs) + " connected graphs; " + std::to_string(stats.placements) +
             " relay placements with honest agents connected, " + std::to_string(stats.final_states) +
             " distinct end states, " + std::to_string(stats.violations) + " violations; " +
             std::to_string(stats.cut_violating) + " of " + std::to_string(stats.cut_placements) +
             " cut-vertex placements can fool an agent (excluded: no second path exists)");
}

void perturbation() {
  constexpr double kSlack = 1.05;
  constexpr int kTau = 50;
  RunConfig c = config_file("two_clique_honest.json");
  c.rounds = 400;
  const PreparedRun prep = prepare_run(c, 7);
  const Graph& g = *prep.graph;
  const auto& loss = *prep.loss;
  const double beta = loss.beta();
  const double mu = loss.mu();
  bool ok = prep.schedule.alpha(1) < mu / (beta * beta);
  const double gbar = prep.schedule.contraction_factor(beta, mu);

  LearningOptions plain;
  plain.record_transcript = false;
  const auto base = run_learning(g, prep.sources, prep.schedule, plain);

  // Unit-Frobenius-norm perturbation Z of all agents' models.
  CounterRng rng(derive_key({8, 50}));
  const size_t d = loss.dim();
  std::vector<double> z(g.size() * d);
  double norm = 0.0;
  for (double& x : z) {
    x = rng.normal();
    norm += x * x;
  }
  for (double& x : z) x /= std::sqrt(norm);
  LearningOptions hit = plain;
  double injected = 0.0;
  hit.perturb = [&](int t, std::vector<ModelVec>& states) {
    if (t != kTau) return;
    for (AgentId v = 0; v < g.size(); ++v) {
      const ModelVec before = states[v];
      states[v] += ModelVec::from_doubles(std::span<const double>(z.data() + v * d, d));
      injected += (states[v] - before).squared_norm();
    }
  };
  const auto moved = run_learning(g, prep.sources, prep.schedule, hit);

  double worst = 0.0;
  int worst_t = 0;
  for (int t = kTau + 1; t <= c.rounds; ++t) {
    double sq = 0.0;
    for (AgentId v = 0; v < g.size(); ++v) sq += (moved.states[t][v] - base.states[t][v]).squared_norm();
    const double ratio = std::sqrt(sq) / std::pow(gbar, t - kTau);
    if (ratio > worst) {
      worst = ratio;
      worst_t = t;
    }
  }
  ok &= std::fabs(std::sqrt(injected) - 1.0) < 1e-6 && worst <= kSlack;
  report(8, "perturbation contraction", ok,
         "gamma_bar=" + fmt("%.6f", gbar) + ", |Z|_F=" + fmt("%.9f", std::sqrt(injected)) +
             ", max |dX(t)|/gamma_bar^(t-tau)=" + fmt("%.4f", worst) + " at t=" + std::to_string(worst_t));
}

void baseline_trend() {
  const RunConfig c = config_file("two_clique_honest.json");
  RunConfig m = c;
  m.baseline = Baseline::kCoordinateMedian;
  size_t wins = 0;
  double valid_sum = 0.0;
  double median_sum = 0.0;
  for (uint64_t s : seed_range(1, 10)) {
    const RunRecord a = run_or_error(c, s);
    const RunRecord b = run_or_error(m, s);
    wins += a.outcome != "ERROR" && b.outcome != "ERROR" && a.final_mse < b.final_mse;
    valid_sum += a.final_mse;
    median_sum += b.final_mse;
  }
  report(9, "baseline trend", wins == 10,
         "validated run lower in " + std::to_string(wins) + "/10 seeds; mean error validated " + fmt("%.4f", valid_sum / 10) +
             " vs median " + fmt("%.4f", median_sum / 10));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism() {
  const fs::path root = fs::temp_directory_path() / "valid_acceptance_determinism";
  fs::remove_all(root);
  struct Case {
    const char* file;
    uint64_t seed;
    std::function<void(RunConfig&)> tweak;
  };
  const std::vector<Case> cases{
      {"two_clique_honest.json", 101, nullptr},
      {"equivocate.json", 201, nullptr},
      {"gaussian_attack.json", 301, nullptr},
      {"benign_attack.json", 501, nullptr},
      {"two_clique_honest.json", 1, [](RunConfig& c) { c.baseline = Baseline::kCoordinateMedian; }},
  };
  size_t same = 0;
  size_t files = 0;
  for (size_t i = 0; i < cases.size(); ++i) {
    RunConfig c = config_file(cases[i].file);
    if (cases[i].tweak) cases[i].tweak(c);
    std::vector<std::vector<fs::path>> written;
    for (int rep = 0; rep < 2; ++rep) {
      clear_calibration_cache();
      const RunRecord r = run_or_error(c, cases[i].seed);
      written.push_back(emit_metrics(r, root / std::to_string(i) / std::to_string(rep)));
    }
    for (size_t k = 0; k < written[0].size() && k < written[1].size(); ++k) {
      ++files;
      same += slurp(written[0][k]) == slurp(written[1][k]);
    }
  }
  fs::remove_all(root);
  report(10, "determinism", files == 3 * cases.size() && same == files,
         std::to_string(same) + "/" + std::to_string(files) + " record files byte-identical across repeated runs");
}

}  // namespace

// Optional arguments select criteria by number; no arguments runs all.
int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<std::pair<int, std::function<void()>>> checks{
      {1, convergence},         {2, completeness},         {3, equivocation},    {4, gaussian_detection},
      {5, benign_admissibility}, {6, hash_properties},      {7, broadcast_agreement},
      {8, perturbation},        {9, baseline_trend},       {10, determinism}};
  for (const auto& [id, check] : checks) {
    if (!only.empty() && !only.count(id)) continue;
    try {
      check();
    } catch (const std::exception& e) {
      report(id, "aborted", false, e.what());
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
