#include "fastortho/synthetic.hpp"

#include <cmath>
#include <limits>

#include "fastortho/analysis.hpp"
#include "fastortho/error.hpp"
#include "fastortho/factorizer.hpp"
#include "fastortho/fast_apply.hpp"
#include "fastortho/linalg.hpp"
#include "fastortho/parallel.hpp"

namespace fastortho {

namespace {

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

} // namespace

std::vector<SyntheticRow> run_synthetic(const SyntheticConfig& config) {
    if (config.d < 2) throw ValidationError("synthetic: d must be at least 2");
    if (config.trials == 0 || config.g_grid.empty()) throw ValidationError("synthetic: empty experiment");

    const std::size_t d = config.d;
    const double norm = 2.0 * static_cast<double>(d);
    const std::size_t cells = config.g_grid.size() * config.trials;
    std::vector<double> ext(cells), rot(cells), stages(cells), sweeps(cells);

    parallel_for(cells, config.threads, [&](std::size_t n) {
        const std::size_t gi = n / config.trials;
        const std::size_t t = n % config.trials;
        const DenseMatrix u = haar_orthogonal(d, config.seed + t);
        FactorizerConfig fc;
        fc.g = config.g_grid[gi];
        fc.epsilon = config.epsilon;
        fc.max_sweeps = config.max_sweeps;
        fc.seed = config.seed + t;
        const GivensProduct extended = factorize(u, DiagonalWeights::ones(d, d), fc);
        fc.rotations_only = true;
        const GivensProduct rotations = factorize(u, DiagonalWeights::ones(d, d), fc);
        ext[n] = frobenius_distance_sq(u, dense_orthogonal(extended)) / norm;
        rot[n] = frobenius_distance_sq(u, dense_orthogonal(rotations)) / norm;
        stages[n] = static_cast<double>(count_stages(extended));
        sweeps[n] = static_cast<double>(extended.log.sweeps.size() - 1);
    });

    std::vector<SyntheticRow> rows;
    for (std::size_t gi = 0; gi < config.g_grid.size(); ++gi) {
        SyntheticRow row;
        row.g = config.g_grid[gi];
        const auto first = static_cast<std::ptrdiff_t>(gi * config.trials);
        const auto last = first + static_cast<std::ptrdiff_t>(config.trials);
        row.extended_errors.assign(ext.begin() + first, ext.begin() + last);
        row.rotations_errors.assign(rot.begin() + first, rot.begin() + last);
        mean_std(row.extended_errors, row.extended_mean, row.extended_std);
        mean_std(row.rotations_errors, row.rotations_mean, row.rotations_std);
        row.relative_improvement = row.rotations_mean > 0.0 ? 1.0 - row.extended_mean / row.rotations_mean : 0.0;
        for (std::size_t t = 0; t < config.trials; ++t)
            row.extended_not_worse += row.extended_errors[t] <= row.rotations_errors[t];
        double unused = 0.0;
        std::vector<double> st(stages.begin() + first, stages.begin() + last);
        std::vector<double> sw(sweeps.begin() + first, sweeps.begin() + last);
        mean_std(st, row.stages_mean, unused);
        mean_std(sw, row.sweeps_mean, unused);
        if (row.g <= d * (d - 1) / 2) {
            row.budget_bound = budget_bound(d, row.g);
            row.budget_bound_normalized = row.budget_bound / norm;
        } else {
            row.budget_bound = row.budget_bound_normalized = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::ordered_json to_json(const SyntheticRow& row, bool include_trials) {
    auto number_or_null = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr; };
    nlohmann::ordered_json j{{"g", row.g},
                             {"extended_mean", row.extended_mean},
                             {"extended_std", row.extended_std},
                             {"rotations_mean", row.rotations_mean},
                             {"rotations_std", row.rotations_std},
                             {"relative_improvement", row.relative_improvement},
                             {"extended_not_worse", row.extended_not_worse},
                             {"budget_bound", number_or_null(row.budget_bound)},
                             {"budget_bound_normalized", number_or_null(row.budget_bound_normalized)},
                             {"stages_mean", row.stages_mean},
                             {"sweeps_mean", row.sweeps_mean}};
    if (include_trials) {
        j["extended_errors"] = row.extended_errors;
        j["rotations_errors"] = row.rotations_errors;
    }
    return j;
}

} // namespace fastortho
