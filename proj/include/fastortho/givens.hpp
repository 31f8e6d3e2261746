#pragma once

#include <cstddef>
#include <cstdint>

#include "fastortho/matrix.hpp"

namespace fastortho {

enum class TransformKind : std::uint8_t { Rotation = 0, Reflector = 1 };

/// Identity except on rows/columns (i, j), where the 2x2 block is
///   Rotation:  [[c, -s], [s,  c]]
///   Reflector: [[c,  s], [s, -c]]
/// Indices are 0-based with i < j.
struct ExtendedGivens {
    std::size_t i = 0;
    std::size_t j = 1;
    double c = 1.0;
    double s = 0.0;
    TransformKind kind = TransformKind::Rotation;

    static ExtendedGivens identity(std::size_t i, std::size_t j) { return {i, j, 1.0, 0.0, TransformKind::Rotation}; }

    bool is_identity() const noexcept { return kind == TransformKind::Rotation && c == 1.0 && s == 0.0; }

    /// Entries of the 2x2 block, row major.
    double g11() const noexcept { return c; }
    double g12() const noexcept { return kind == TransformKind::Rotation ? -s : s; }
    double g21() const noexcept { return s; }
    double g22() const noexcept { return kind == TransformKind::Rotation ? c : -c; }

    friend bool operator==(const ExtendedGivens&, const ExtendedGivens&) = default;
};

/// Throws ValidationError unless i < j < d and c^2 + s^2 = 1 within 1e-12.
void validate(const ExtendedGivens& g, std::size_t d);

/// The 2x2 sub-block [[Z_ii, Z_ij], [Z_ji, Z_jj]].
struct Block2 {
    double z11 = 0.0;
    double z12 = 0.0;
    double z21 = 0.0;
    double z22 = 0.0;

    double det() const noexcept { return z11 * z22 - z12 * z21; }
    double trace() const noexcept { return z11 + z22; }
    double frobenius_sq() const noexcept { return z11 * z11 + z12 * z12 + z21 * z21 + z22 * z22; }
};

Block2 block_of(const DenseMatrix& z, std::size_t i, std::size_t j);

/// Nuclear norm minus trace: the objective gain available from one transform on (i, j).
double score(const Block2& b) noexcept;
/// Gain when only rotations are allowed (max over rotations of tr(G^T B) minus tr B).
double rotation_score(const Block2& b) noexcept;

struct SingularPair {
    double s1;
    double s2;
};
/// Closed-form singular values of a 2x2 block, s1 >= s2 >= 0.
SingularPair svd2x2(const Block2& b) noexcept;

struct OptimalTransform {
    ExtendedGivens transform;
    bool degenerate = false; ///< block had no usable polar factor; identity returned
};

/// Orthogonal polar factor of the block as an extended Givens transform on (i, j):
/// the transform maximising tr(G^T B). The det = 0 boundary uses a rotation.
OptimalTransform optimal_transform(const Block2& b, std::size_t i, std::size_t j) noexcept;
/// Best rotation only (maximises tr(G^T B) over rotations).
OptimalTransform optimal_rotation(const Block2& b, std::size_t i, std::size_t j) noexcept;

/// m <- G m (or G^T m). Touches rows i and j only.
void apply_left(const ExtendedGivens& g, DenseMatrix& m, bool transpose);
/// m <- m G (or m G^T). Touches columns i and j only.
void apply_right(const ExtendedGivens& g, DenseMatrix& m, bool transpose);

/// Explicit d x d matrix of the transform.
DenseMatrix to_dense(const ExtendedGivens& g, std::size_t d);

} // namespace fastortho
