#include "valid/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"

namespace valid {

size_t threads_from_env() {
  const char* env = std::getenv("VALID_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1) return 1;
  return static_cast<size_t>(n);
}

SweepResult run_sweep(const std::string& config_text, const std::string& vary,
                      const std::vector<std::string>& values, const std::vector<uint64_t>& seeds,
                      size_t threads) {
  SweepResult result;
  const size_t cells = values.size() * seeds.size();
  if (cells == 0) return result;

  // Parse every cell up front so config errors surface before any work.
  std::vector<RunConfig> configs;
  configs.reserve(cells);
  for (const auto& value : values) {
    const std::string text = set_config_field(config_text, vary, value);
    for (uint64_t seed : seeds) {
      RunConfig c = parse_config(text);
      c.seed = seed;
      configs.push_back(std::move(c));
    }
  }

  result.records.resize(cells);
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (size_t i = next++; i < cells; i = next++) {
      try {
        result.records[i] = run_config(configs[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const size_t workers = std::max<size_t>(1, std::min(threads, cells));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  for (size_t vi = 0; vi < values.size(); ++vi) {
    SweepRow row;
    row.value = values[vi];
    for (size_t si = 0; si < seeds.size(); ++si) {
      const RunRecord& r = result.records[vi * seeds.size() + si];
      ++row.runs;
      if (r.outcome == "A") ++row.a;
      if (r.outcome == "B") ++row.b;
      if (r.outcome == "C") ++row.c;
      if (r.outcome == "FAIL") ++row.fail;
      row.mean_final_mse += r.final_mse;
    }
    row.detection_rate = static_cast<double>(row.c) / static_cast<double>(row.runs);
    row.mean_final_mse /= static_cast<double>(row.runs);
    result.rows.push_back(row);
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const std::string& vary, const SweepResult& result) {
  out << "field,value,runs,A,B,C,FAIL,detection_rate,mean_final_mse\n";
  for (const auto& row : result.rows) {
    // Values are JSON literals; quote them for CSV when they contain commas or quotes.
    std::string value = row.value;
    if (value.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char ch : value) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      value = q + "\"";
    }
    out << vary << ',' << value << ',' << row.runs << ',' << row.a << ',' << row.b << ',' << row.c
        << ',' << row.fail << ',' << nlohmann::json(row.detection_rate).dump() << ','
        << nlohmann::json(row.mean_final_mse).dump() << '\n';
  }
}

}  // namespace valid
