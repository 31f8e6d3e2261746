#include "fastortho/givens.hpp"

#include <cmath>
#include <string>

#include "fastortho/error.hpp"

namespace fastortho {

namespace {

constexpr double kDegenerateRadius = 1e-300;

} // namespace

void validate(const ExtendedGivens& g, std::size_t d) {
    if (!(g.i < g.j) || g.j >= d) {
        throw ValidationError("transform indices (" + std::to_string(g.i + 1) + "," +
                              std::to_string(g.j + 1) + ") invalid for d=" + std::to_string(d));
    }
    const double unit = g.c * g.c + g.s * g.s - 1.0;
    if (!(std::abs(unit) <= 1e-12)) throw ValidationError("transform has c^2 + s^2 != 1", std::abs(unit));
}

Block2 block_of(const DenseMatrix& z, std::size_t i, std::size_t j) {
    return {z(i, i), z(i, j), z(j, i), z(j, j)};
}

double score(const Block2& b) noexcept {
    const double tr = b.z11 + b.z22;
    if (b.det() >= 0.0) return std::hypot(tr, b.z12 - b.z21) - tr;
    return std::hypot(b.z11 - b.z22, b.z12 + b.z21) - tr;
}

double rotation_score(const Block2& b) noexcept {
    const double tr = b.z11 + b.z22;
    return std::hypot(tr, b.z12 - b.z21) - tr;
}

SingularPair svd2x2(const Block2& b) noexcept {
    // s1 + s2 = sqrt(|B|_F^2 + 2|det|) and s1 - s2 = sqrt(|B|_F^2 - 2|det|).
    const double f = b.frobenius_sq();
    const double two_det = 2.0 * std::abs(b.det());
    const double sum = std::sqrt(f + two_det);
    const double diff = std::sqrt(std::max(0.0, f - two_det));
    return {0.5 * (sum + diff), 0.5 * std::max(0.0, sum - diff)};
}

OptimalTransform optimal_rotation(const Block2& b, std::size_t i, std::size_t j) noexcept {
    const double x = b.z11 + b.z22;
    const double y = b.z21 - b.z12;
    const double r = std::hypot(x, y);
    if (!(r > kDegenerateRadius)) return {ExtendedGivens::identity(i, j), true};
    return {ExtendedGivens{i, j, x / r, y / r, TransformKind::Rotation}, false};
}

OptimalTransform optimal_transform(const Block2& b, std::size_t i, std::size_t j) noexcept {
    if (b.det() >= 0.0) return optimal_rotation(b, i, j);
    const double x = b.z11 - b.z22;
    const double y = b.z12 + b.z21;
    const double r = std::hypot(x, y);
    if (!(r > kDegenerateRadius)) return {ExtendedGivens::identity(i, j), true};
    return {ExtendedGivens{i, j, x / r, y / r, TransformKind::Reflector}, false};
}

void apply_left(const ExtendedGivens& g, DenseMatrix& m, bool transpose) {
    if (g.i >= m.rows() || g.j >= m.rows()) throw ShapeError("apply_left: transform index out of range");
    const double a11 = g.g11();
    const double a12 = transpose ? g.g21() : g.g12();
    const double a21 = transpose ? g.g12() : g.g21();
    const double a22 = g.g22();
    for (std::size_t col = 0; col < m.cols(); ++col) {
        const double xi = m(g.i, col);
        const double xj = m(g.j, col);
        m(g.i, col) = a11 * xi + a12 * xj;
        m(g.j, col) = a21 * xi + a22 * xj;
    }
}

void apply_right(const ExtendedGivens& g, DenseMatrix& m, bool transpose) {
    if (g.i >= m.cols() || g.j >= m.cols()) throw ShapeError("apply_right: transform index out of range");
    const double a11 = g.g11();
    const double a12 = transpose ? g.g21() : g.g12();
    const double a21 = transpose ? g.g12() : g.g21();
    const double a22 = g.g22();
    auto ci = m.column(g.i);
    auto cj = m.column(g.j);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double xi = ci[r];
        const double xj = cj[r];
        ci[r] = xi * a11 + xj * a21;
        cj[r] = xi * a12 + xj * a22;
    }
}

DenseMatrix to_dense(const ExtendedGivens& g, std::size_t d) {
    validate(g, d);
    DenseMatrix m = DenseMatrix::identity(d);
    m(g.i, g.i) = g.g11();
    m(g.i, g.j) = g.g12();
    m(g.j, g.i) = g.g21();
    m(g.j, g.j) = g.g22();
    return m;
}

} // namespace fastortho
