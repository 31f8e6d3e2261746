#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fastortho/matrix.hpp"
#include "fastortho/product.hpp"

namespace fastortho {

/// What the projection does with one transform after liveness pruning.
enum class ApplyOp : std::uint8_t {
    Full,     ///< both outputs needed: 6 flops
    HalfRowI, ///< only output i needed: 3 flops
    HalfRowJ, ///< only output j needed: 3 flops
    Skip,     ///< neither output needed
};

/// Pruned schedule for y = Sigma_bar^T U_bar^T x.
///
/// The projection runs transforms[0]^T first and transforms[g-1]^T last, so
/// `ops[k]` and stage membership are indexed by the transform's slot k.
struct ApplyPlan {
    std::size_t d = 0;
    std::size_t p = 0;
    std::vector<ApplyOp> ops;
    /// Consecutive runs of slots with pairwise-disjoint indices, in execution order.
    std::vector<std::vector<std::size_t>> stages;
    /// Input coordinates the output depends on.
    std::vector<bool> live_mask;
    std::uint64_t flops_per_vector = 0;

    std::size_t full_count() const;
    std::size_t half_count() const;
    std::size_t skip_count() const;
    /// Fraction of the d input coordinates that are ever read.
    double selection_fraction() const;
};

/// Backward liveness over the projection plus greedy, order-preserving stage split.
ApplyPlan plan(const GivensProduct& product);

/// Per-call counts of executed arithmetic, for checking the plan's accounting.
struct ApplyStats {
    std::uint64_t flops = 0;
    std::size_t full = 0;
    std::size_t half = 0;
};

/// Sigma_bar^T U_bar^T x using only the planned operations (length p).
std::vector<double> project(const ApplyPlan& plan, const GivensProduct& product, std::span<const double> x,
                            ApplyStats* stats = nullptr);

/// Same as `project` without pruning: every transform applied in full (6g + p flops).
std::vector<double> project_unpruned(const GivensProduct& product, std::span<const double> x);

/// U_bar Sigma_bar y (length d).
std::vector<double> reconstruct(const GivensProduct& product, std::span<const double> y);

/// Projects each column of `x` (d x n) into a p x n matrix. Columns are split
/// across `threads` workers; the result does not depend on the thread count.
DenseMatrix project_batch(const ApplyPlan& plan, const GivensProduct& product, const DenseMatrix& x,
                          unsigned threads = 1);

/// Greedy stage partition of the transform sequence (execution order of the projection).
std::vector<std::vector<std::size_t>> stage_partition(const GivensProduct& product);
std::size_t count_stages(const GivensProduct& product);

/// Dense projection cost 2pd used as the speedup baseline.
inline std::uint64_t dense_projection_flops(std::size_t d, std::size_t p) { return 2ull * d * p; }

} // namespace fastortho
