#pragma once

#include <cstdint>
#include <vector>

#include "fastortho/matrix.hpp"

namespace fastortho {

/// Thin SVD: a = u * diag(s) * v^T with u (m x k), v (n x k), k = min(m, n).
struct SvdResult {
    DenseMatrix u;
    std::vector<double> s; ///< descending, non-negative
    DenseMatrix v;
};

struct SvdOptions {
    int max_sweeps = 60;
    /// Column-pair orthogonality threshold; 0 picks rows * machine epsilon.
    double tolerance = 0.0;
};

/// One-sided (Hestenes) Jacobi SVD with cyclic sweeps. Intended for desk-scale
/// inputs. Throws ConvergenceError when `max_sweeps` is exhausted.
SvdResult svd_dense(const DenseMatrix& a, const SvdOptions& options = {});

/// Singular values only, descending.
std::vector<double> singular_values(const DenseMatrix& a);

/// Haar-distributed d x d orthogonal matrix (QR of a Gaussian matrix with the
/// R-diagonal sign fix), with columns then flipped so every diagonal entry is
/// non-negative. Deterministic for a given seed.
DenseMatrix haar_orthogonal(std::size_t d, std::uint64_t seed);

} // namespace fastortho
