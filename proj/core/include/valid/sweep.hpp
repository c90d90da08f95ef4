#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "valid/experiment.hpp"

namespace valid {

struct SweepRow {
  std::string value;
  size_t runs = 0;
  size_t a = 0;
  size_t b = 0;
  size_t c = 0;
  size_t fail = 0;
  /// Fraction of runs classified C.
  double detection_rate = 0.0;
  double mean_final_mse = 0.0;
};

struct SweepResult {
  /// Row-major over (value, seed) in the order given.
  std::vector<RunRecord> records;
  std::vector<SweepRow> rows;
};

/// Runs every (value, seed) cell of a one-field sweep. `vary` is a dotted
/// field path and `values` are JSON literals. Cells are independent and run
/// on `threads` workers; results do not depend on the thread count.
SweepResult run_sweep(const std::string& config_text, const std::string& vary,
                      const std::vector<std::string>& values, const std::vector<uint64_t>& seeds,
                      size_t threads = 1);

/// VALID_THREADS, or 1 when unset or malformed.
size_t threads_from_env();

void write_sweep_csv(std::ostream& out, const std::string& vary, const SweepResult& result);

}  // namespace valid
