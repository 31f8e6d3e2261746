#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "fastortho/fast_apply.hpp"
#include "fastortho/matrix.hpp"
#include "fastortho/product.hpp"

namespace fastortho {

/// Points are the columns of `x` (d x N).
struct Dataset {
    DenseMatrix x;
    std::vector<int> labels; ///< empty when unlabeled
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;

    std::size_t dimension() const noexcept { return x.rows(); }
    std::size_t size() const noexcept { return x.cols(); }
    bool labeled() const noexcept { return !labels.empty(); }
};

enum class LabelColumn { Last, None };

/// One sample per line, comma-separated features, optional trailing integer label.
/// All points start in the training split.
Dataset load_dataset_csv(const std::filesystem::path& path, LabelColumn label_column);
void save_dataset_csv(const std::filesystem::path& path, const Dataset& data, int decimals = 6);

/// Seeded random train/test split.
void split(Dataset& data, double test_fraction, std::uint64_t seed);

/// Two Gaussian clouds in d = 64 with N = 2000 points, separated along a random direction.
Dataset make_two_blobs(std::uint64_t seed, std::size_t d = 64, std::size_t n = 2000);
/// Ten noisy 8 x 8 glyph classes (d = 64).
Dataset make_digits_like(std::uint64_t seed, std::size_t n = 1500);

struct PcaModel {
    DenseMatrix u_p;
    DiagonalWeights sigma;
    std::vector<double> mean;
};

/// PCA on the training columns (all columns when no split exists). Each component is
/// signed so that its largest-magnitude entry is positive.
PcaModel fit_pca(const Dataset& data, std::size_t p, bool center = true);

/// The selected columns of `data.x`.
DenseMatrix gather_columns(const DenseMatrix& x, std::span<const std::size_t> indices);

/// U_p^T x for every column (the dense 2pd-per-vector baseline).
DenseMatrix pca_project(const PcaModel& model, const DenseMatrix& x, unsigned threads = 1);

struct FastProjection {
    GivensProduct product;
    ApplyPlan plan;
};

/// Factorises U_p Sigma_p. g = 0 gives the empty product (weights from the rule).
FastProjection train_fast_projection(const PcaModel& model, const FactorizerConfig& config);

struct KnnResult {
    std::vector<int> predictions;
    double accuracy = 0.0; ///< 0 when no test labels are given
};

/// Euclidean k-NN with majority vote. Distance ties go to the lower training index and
/// vote ties to the smallest label.
KnnResult knn_classify(const DenseMatrix& train_proj, std::span<const int> train_labels, const DenseMatrix& test_proj,
                       std::span<const int> test_labels, std::size_t k, unsigned threads = 1);

struct ExperimentConfig {
    std::size_t p = 4;
    std::vector<std::size_t> g_grid;
    std::vector<SigmaRule> rules{SigmaRule::Identity};
    FactorizerConfig factorizer;
    std::size_t k = 10;
    bool center = true;
    int timing_repeats = 5;
    unsigned threads = 1;
};

struct ExperimentRow {
    std::size_t g = 0;
    SigmaRule sigma_rule = SigmaRule::Identity;
    double accuracy_full = 0.0;
    double accuracy_fast = 0.0;
    double flops_speedup = 0.0;
    double time_speedup = 0.0;
    double selection_fraction = 0.0;
    double frobenius_error = 0.0; ///< (2d)^-1 ||U_p - U_bar_p||_F^2
    std::uint64_t flops_per_vector = 0;
    std::size_t stages = 0;
    double prediction_agreement = 0.0; ///< share of test points with identical predictions
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
};

/// Trains one fast projection per (g, rule) and compares k-NN accuracy on the test split.
ExperimentReport run_experiment(const Dataset& data, const ExperimentConfig& config);

nlohmann::ordered_json to_json(const ExperimentRow& row, bool include_timing = true);

/// pd - p(p+1)/2: the parameter count of a d x p orthonormal frame, d(d-1)/2 when p = d.
std::size_t saturation_budget(std::size_t d, std::size_t p);

} // namespace fastortho
