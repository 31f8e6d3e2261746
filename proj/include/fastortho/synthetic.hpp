#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "fastortho/product.hpp"

namespace fastortho {

struct SyntheticConfig {
    std::size_t d = 50;
    std::vector<std::size_t> g_grid{50};
    std::size_t trials = 10;
    std::uint64_t seed = 0; ///< trial t factorises haar_orthogonal(d, seed + t)
    double epsilon = 1e-2;
    int max_sweeps = 100;
    unsigned threads = 1;
};

/// Normalised errors (2d)^-1 ||U - U_bar||_F^2 for one g, over all trials.
struct SyntheticRow {
    std::size_t g = 0;
    double extended_mean = 0.0;
    double extended_std = 0.0;
    double rotations_mean = 0.0;
    double rotations_std = 0.0;
    double relative_improvement = 0.0; ///< 1 - extended_mean / rotations_mean
    std::size_t extended_not_worse = 0; ///< trials where extended <= rotations-only
    double budget_bound = 0.0;          ///< ||U - U_bar||_F^2 bound (NaN past d(d-1)/2)
    double budget_bound_normalized = 0.0;
    double stages_mean = 0.0;
    double sweeps_mean = 0.0;
    std::vector<double> extended_errors;
    std::vector<double> rotations_errors;
};

std::vector<SyntheticRow> run_synthetic(const SyntheticConfig& config);

nlohmann::ordered_json to_json(const SyntheticRow& row, bool include_trials = false);

} // namespace fastortho
