#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "valid/experiment.hpp"

namespace valid {

/// Writes run_<seed>.jsonl (one object per round, then one final object),
/// curve_<seed>.csv (t,mse,dispersion,grad_norm) and summary_<seed>.csv into
/// `dir`, creating it if needed. Throws Error naming the path on I/O failure.
/// Returns the written paths.
std::vector<std::filesystem::path> emit_metrics(const RunRecord& record,
                                                const std::filesystem::path& dir);

void write_jsonl(std::ostream& out, const RunRecord& record);
void write_curve_csv(std::ostream& out, const RunRecord& record);

/// Header plus one row per record.
void write_summary_csv(std::ostream& out, const std::vector<RunRecord>& records);

/// The final JSONL object alone, for printing.
std::string final_summary_json(const RunRecord& record);

}  // namespace valid
