#include "fastortho/matrix.hpp"

#include <cmath>
#include <string>

#include "fastortho/error.hpp"

namespace fastortho {

namespace {

std::string shape_str(const DenseMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    if (data_.size() != rows * cols) {
        throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    DenseMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("ragged row literal");
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

DiagonalWeights DiagonalWeights::ones(std::size_t d, std::size_t p) {
    return DiagonalWeights{d, std::vector<double>(p, 1.0)};
}

DenseMatrix DiagonalWeights::dense() const {
    DenseMatrix m(d, values.size());
    for (std::size_t t = 0; t < values.size(); ++t) m(t, t) = values[t];
    return m;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: " + shape_str(a) + " times " + shape_str(b));
    }
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto cj = c.column(j);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            auto ak = a.column(k);
            for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
        }
    }
    return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_tn: " + shape_str(a) + "^T times " + shape_str(b));
    }
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.column(i), b.column(j));
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

double frobenius_norm_sq(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return s;
}

double frobenius_distance_sq(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("frobenius_distance_sq: " + shape_str(a) + " vs " + shape_str(b));
    }
    double s = 0.0;
    auto x = a.data();
    auto y = b.data();
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double e = x[k] - y[k];
        s += e * e;
    }
    return s;
}

double trace(const DenseMatrix& a) {
    double t = 0.0;
    const std::size_t n = std::min(a.rows(), a.cols());
    for (std::size_t i = 0; i < n; ++i) t += a(i, i);
    return t;
}

DenseMatrix leading_columns(const DenseMatrix& a, std::size_t count) {
    if (count > a.cols()) throw ShapeError("leading_columns: requested more columns than present");
    auto src = a.data();
    return DenseMatrix(a.rows(), count,
                       std::vector<double>(src.begin(), src.begin() + a.rows() * count));
}

DenseMatrix scale_columns(const DenseMatrix& a, std::span<const double> weights) {
    if (weights.size() != a.cols()) throw ShapeError("scale_columns: weight count mismatch");
    DenseMatrix out = a;
    for (std::size_t t = 0; t < a.cols(); ++t)
        for (double& v : out.column(t)) v *= weights[t];
    return out;
}

double orthonormality_residual(const DenseMatrix& a) {
    DenseMatrix g = matmul_tn(a, a);
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return std::sqrt(frobenius_norm_sq(g));
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
}

void require_finite(const DenseMatrix& a, const char* what) {
    for (double v : a.data()) {
        if (!std::isfinite(v)) throw ValidationError(std::string(what) + ": non-finite entry");
    }
}

} // namespace fastortho
