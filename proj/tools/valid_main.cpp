// valid: command-line driver for single runs, sweeps, calibrations and the
// coordinate-median baseline.
//
// Exit codes: 0 for outcomes A/B/C (or a finished calibration), 2 if any run
// is classified FAIL, 1 on configuration or I/O errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "valid/calibration.hpp"
#include "valid/errors.hpp"
#include "valid/metrics.hpp"
#include "valid/sweep.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw valid::ConfigError("", "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_values(const std::string& csv) {
  // Splits on commas outside brackets/braces/quotes so JSON arrays survive.
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  bool quoted = false;
  for (char ch : csv) {
    if (ch == '"') quoted = !quoted;
    if (!quoted && (ch == '[' || ch == '{')) ++depth;
    if (!quoted && (ch == ']' || ch == '}')) --depth;
    if (ch == ',' && depth == 0 && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<uint64_t> parse_seeds(const std::string& csv) {
  std::vector<uint64_t> out;
  for (const auto& s : split_values(csv)) {
    if (s.empty()) continue;
    size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw valid::ConfigError("--seeds", "not an integer: " + s);
    out.push_back(v);
  }
  return out;
}

int exit_code(const std::vector<valid::RunRecord>& records) {
  for (const auto& r : records) {
    if (r.outcome == "FAIL") return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Validated decentralized learning simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run one experiment and write metrics");
  run->add_option("--config", config_path, "Config JSON")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output directory");

  std::string vary;
  std::string values_csv;
  std::string seeds_csv;
  auto* sweep = app.add_subcommand("sweep", "Run a one-field sweep over values and seeds");
  sweep->add_option("--config", config_path, "Config JSON")->required();
  sweep->add_option("--vary", vary, "Dotted field path, e.g. attack.sigma_scale")->required();
  sweep->add_option("--values", values_csv, "Comma-separated JSON literals")->required();
  sweep->add_option("--seeds", seeds_csv, "Comma-separated seeds")->required();
  sweep->add_option("--out", out_dir, "Output directory");

  std::string what;
  auto* calibrate = app.add_subcommand("calibrate", "Print calibrated bounds or gamma_max");
  calibrate->add_option("what", what, "bounds | gamma")->required()->check(CLI::IsMember({"bounds", "gamma"}));
  calibrate->add_option("--config", config_path, "Config JSON")->required();

  auto* baseline = app.add_subcommand("baseline", "Run the coordinate-median baseline");
  baseline->add_option("--config", config_path, "Config JSON")->required();
  baseline->add_option("--seed", seed, "Override the config seed");
  baseline->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed() || baseline->parsed()) {
      valid::RunConfig cfg = valid::load_config(config_path);
      if (seed) cfg.seed = *seed;
      if (baseline->parsed()) cfg.baseline = valid::Baseline::kCoordinateMedian;
      const valid::RunRecord rec = valid::run_config(cfg);
      for (const auto& p : valid::emit_metrics(rec, out_dir)) std::cerr << "wrote " << p.string() << '\n';
      std::cout << valid::final_summary_json(rec) << '\n';
      return exit_code({rec});
    }
    if (sweep->parsed()) {
      const std::string text = read_file(config_path);
      valid::parse_config(text);
      const auto seeds = parse_seeds(seeds_csv);
      const auto result =
          valid::run_sweep(text, vary, split_values(values_csv), seeds, valid::threads_from_env());
      std::filesystem::create_directories(out_dir);
      // out/value_<k>/ holds the per-seed files of the k-th value.
      for (size_t i = 0; i < result.records.size(); ++i) {
        const auto sub = std::filesystem::path(out_dir) / ("value_" + std::to_string(i / seeds.size()));
        valid::emit_metrics(result.records[i], sub);
      }
      const auto summary_path = std::filesystem::path(out_dir) / "sweep_summary.csv";
      std::ofstream summary(summary_path);
      if (!summary) throw valid::Error("cannot open " + summary_path.string());
      valid::write_sweep_csv(summary, vary, result);
      valid::write_sweep_csv(std::cout, vary, result);
      const auto runs_path = std::filesystem::path(out_dir) / "runs_summary.csv";
      std::ofstream runs(runs_path);
      if (!runs) throw valid::Error("cannot open " + runs_path.string());
      valid::write_summary_csv(runs, result.records);
      return exit_code(result.records);
    }
    if (calibrate->parsed()) {
      const valid::RunConfig cfg = valid::load_config(config_path);
      if (what == "bounds") {
        const auto b = valid::calibrate_bounds(cfg, cfg.calibration.runs, cfg.calibration.margin);
        std::cout << "t,B_t,C_t\n";
        for (size_t t = 0; t < b.model.size(); ++t) {
          std::cout << t << ',' << b.model[t] << ',' << b.gradient[t] << '\n';
        }
      } else {
        std::cout << "gamma_max," << valid::calibrate_gamma_max(cfg, cfg.epsilon, cfg.calibration.runs)
                  << '\n';
      }
      return 0;
    }
  } catch (const valid::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
