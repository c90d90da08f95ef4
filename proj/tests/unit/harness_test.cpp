#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "valid/calibration.hpp"
#include "valid/config.hpp"
#include "valid/errors.hpp"
#include "valid/experiment.hpp"
#include "valid/metrics.hpp"
#include "valid/sweep.hpp"

namespace valid {
namespace {

const char* kSmall = R"({
  "seed": 3,
  "graph": {"family": "complete", "n": 5},
  "loss": {"kind": "quadratic", "means": [[1.0], [0.0], [-1.0], [0.5], [-0.5]], "sigma_d": 0.3},
  "batch": 5,
  "rounds": 120,
  "alpha0": 0.5,
  "gamma": 0.9,
  "epsilon": 0.5,
  "bounds": {"model": 10, "gradient": 10}
})";

std::string error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(error_path(R"({"rounds": "many"})"), "rounds");
  EXPECT_EQ(error_path(R"({"loss": {"sigma_d": -1}})"), "loss.sigma_d");
  EXPECT_EQ(error_path(R"({"graph": {"family": "torus"}})"), "graph.family");
  EXPECT_EQ(error_path(R"({"colour": 1})"), "colour");
  EXPECT_EQ(error_path(R"({"attack": {"strategy": "gaussian", "byzantine": [1], "sigma": "huge"}})"),
            "attack.sigma");
  EXPECT_EQ(error_path(R"({"attack": {"strategy": "benign", "byzantine": [1]}})"), "attack.q_means");
  EXPECT_EQ(error_path("{not json"), "");
}

TEST(Config, CanonicalJsonRoundTrips) {
  const RunConfig c = parse_config(kSmall);
  const std::string canon = to_json(c);
  EXPECT_EQ(to_json(parse_config(canon)), canon);
  EXPECT_EQ(c.rounds, 120);
  EXPECT_EQ(*c.gamma, 0.9);
  EXPECT_FALSE(c.delta.has_value());
}

TEST(Config, HashIgnoresSeedOnly) {
  RunConfig a = parse_config(kSmall);
  RunConfig b = a;
  b.seed = 99;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.rounds = 121;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Config, SetFieldByPath) {
  const std::string t = set_config_field(kSmall, "loss.sigma_d", "0.7");
  EXPECT_DOUBLE_EQ(parse_config(t).loss.sigma_d, 0.7);
  const std::string u = set_config_field(kSmall, "attack", R"({"strategy": "gaussian", "byzantine": [2]})");
  EXPECT_DOUBLE_EQ(parse_config(set_config_field(u, "attack.sigma", "0.1")).attack.spec.sigma, 0.1);
}

TEST(Config, HonestConfigDropsAttack) {
  RunConfig c = parse_config(R"({"attack": {"strategy": "gaussian", "byzantine": [1], "sigma": 0.1}})");
  EXPECT_TRUE(c.attack.spec.active());
  EXPECT_FALSE(honest_config(c).attack.spec.active());
}

TEST(Experiment, RecordShapeAndDeterminism) {
  const RunConfig c = parse_config(kSmall);
  const RunRecord a = run_config(c);
  const RunRecord b = run_config(c);
  EXPECT_EQ(a.rounds.size(), 120u);
  EXPECT_EQ(a.outcome, "A");
  const auto dir = std::filesystem::temp_directory_path() / "valid_harness_test";
  std::filesystem::remove_all(dir);
  const auto pa = emit_metrics(a, dir / "a");
  const auto pb = emit_metrics(b, dir / "b");
  ASSERT_EQ(pa.size(), pb.size());
  for (size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(read_file(pa[i]), read_file(pb[i])) << pa[i];

  std::istringstream jsonl(read_file(dir / "a" / "run_3.jsonl"));
  size_t lines = 0;
  for (std::string line; std::getline(jsonl, line);) ++lines;
  EXPECT_EQ(lines, 121u);
  const std::string summary = read_file(dir / "a" / "summary_3.csv");
  EXPECT_NE(summary.find("outcome"), std::string::npos);
  EXPECT_NE(summary.find(",A,"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Experiment, BaselineReportsErrorOnly) {
  RunConfig c = parse_config(kSmall);
  c.baseline = Baseline::kCoordinateMedian;
  const RunRecord r = run_config(c);
  EXPECT_EQ(r.mode, "baseline");
  EXPECT_EQ(r.outcome, "NA");
  EXPECT_GT(r.final_mse, 0.0);
}

TEST(Experiment, DisconnectingByzantineSetIsAConfigError) {
  RunConfig c = parse_config(kSmall);
  c.graph.family = GraphSpec::Family::kRing;
  c.attack.spec.strategy = AttackSpec::Strategy::kGaussian;
  c.attack.spec.byzantine = {0, 2};
  EXPECT_THROW(prepare_run(c, 1), ConfigError);
}

TEST(Sweep, ParallelEqualsSequential) {
  const std::vector<std::string> values{"0.3", "0.6"};
  const std::vector<uint64_t> seeds{1, 2, 3};
  const SweepResult one = run_sweep(kSmall, "loss.sigma_d", values, seeds, 1);
  const SweepResult many = run_sweep(kSmall, "loss.sigma_d", values, seeds, 4);
  ASSERT_EQ(one.records.size(), 6u);
  ASSERT_EQ(many.records.size(), 6u);
  for (size_t i = 0; i < 6; ++i) {
    std::ostringstream a;
    std::ostringstream b;
    write_jsonl(a, one.records[i]);
    write_jsonl(b, many.records[i]);
    EXPECT_EQ(a.str(), b.str());
  }
  std::ostringstream ca;
  std::ostringstream cb;
  write_sweep_csv(ca, "loss.sigma_d", one);
  write_sweep_csv(cb, "loss.sigma_d", many);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(one.rows.size(), 2u);
  EXPECT_EQ(one.rows[0].runs, 3u);
}

TEST(Sweep, EmptySeedsGiveEmptyOutput) {
  const SweepResult r = run_sweep(kSmall, "rounds", {"50"}, {}, 2);
  EXPECT_TRUE(r.records.empty());
}

TEST(Sweep, ThreadsFromEnvironment) {
  ::setenv("VALID_THREADS", "3", 1);
  EXPECT_EQ(threads_from_env(), 3u);
  ::setenv("VALID_THREADS", "zero", 1);
  EXPECT_EQ(threads_from_env(), 1u);
  ::unsetenv("VALID_THREADS");
  EXPECT_EQ(threads_from_env(), 1u);
}

}  // namespace
}  // namespace valid
