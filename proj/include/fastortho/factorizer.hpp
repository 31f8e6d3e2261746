#pragma once

#include <span>

#include "fastortho/matrix.hpp"
#include "fastortho/product.hpp"
#include "fastortho/score_table.hpp"

namespace fastortho {

/// Scores for every pair of Z = L N^T, each from four length-p dot products.
ScoreTable initialize_scores(const DenseMatrix& l, const DenseMatrix& n, bool rotations_only = false);

/// Scores read directly off an explicit d x d matrix Z.
ScoreTable scores_from(const DenseMatrix& z, bool rotations_only = false);

/// Working set of one coordinate-minimisation sweep. `z` mirrors l * n^T and is
/// updated in O(d) per transform; `table` holds the scores of `z`.
struct GreedyState {
    DenseMatrix l;
    DenseMatrix n;
    DenseMatrix z;
    ScoreTable table;
    bool rotations_only = false;
    double l_norm_sq = 0.0;

    GreedyState(DenseMatrix l_in, DenseMatrix n_in, bool rotations_only_in);

    /// ||L - N||_F^2, evaluated as ||L||^2 + ||N||^2 - 2 tr(Z).
    double objective() const;
};

/// One inner-loop step for `slot`: removes the slot's current transform from N,
/// picks the best-scoring pair, solves the 2x2 problem there, applies the transpose
/// to L, refreshes the scores touching the chosen rows, and stores the transform.
ExtendedGivens greedy_step(GreedyState& state, std::span<ExtendedGivens> slots, std::size_t slot);

/// New diagonal weights after a sweep. `l_final` is U_bar^T U_p Sigma_p (d x p).
DiagonalWeights update_sigma(const DenseMatrix& l_final, SigmaRule rule, const DiagonalWeights& sigma_in);

/// Greedy factorisation of U_p Sigma_p into U_bar Sigma_bar with exactly config.g transforms.
GivensProduct factorize(const DenseMatrix& u_p, const DiagonalWeights& sigma, const FactorizerConfig& config);

} // namespace fastortho
