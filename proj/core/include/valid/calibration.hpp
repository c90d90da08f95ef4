#pragma once

#include "valid/config.hpp"
#include "valid/validation.hpp"

namespace valid {

/// Runs `runs` honest simulations with seeds derived from the calibration
/// seed and returns B_t = margin * max |x_v^(t)|, C_t = margin * max |g_v^(t)|
/// over runs and agents.
BoundSchedule calibrate_bounds(const RunConfig& config, int runs, double margin);

/// Largest gamma on the grid k/64 (binary search) for which every honest
/// calibration run passes the heterogeneity check with the given epsilon.
/// Throws CalibrationFailed if gamma = 0 already fails.
double calibrate_gamma_max(const RunConfig& config, double epsilon, int runs);

/// Seed of calibration run k.
uint64_t calibration_seed(const RunConfig& config, int k);

/// Calibrated values are cached per honest configuration; this drops the cache.
void clear_calibration_cache();

}  // namespace valid
