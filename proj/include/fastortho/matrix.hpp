#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fastortho {

/// Column-major dense matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);

    static DenseMatrix identity(std::size_t n);
    /// Row-wise literal, e.g. `from_rows({{1, 2}, {3, 4}})`.
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[c * rows_ + r]; }

    std::span<double> column(std::size_t c) noexcept { return {data_.data() + c * rows_, rows_}; }
    std::span<const double> column(std::size_t c) const noexcept {
        return {data_.data() + c * rows_, rows_};
    }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Diagonal of a d x p matrix that is zero except for its leading p x p diagonal.
struct DiagonalWeights {
    std::size_t d = 0;
    std::vector<double> values;

    std::size_t p() const noexcept { return values.size(); }

    static DiagonalWeights ones(std::size_t d, std::size_t p);
    /// Expands to the explicit d x p matrix.
    DenseMatrix dense() const;

    friend bool operator==(const DiagonalWeights&, const DiagonalWeights&) = default;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
/// a^T b without forming the transpose.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm_sq(const DenseMatrix& a);
double frobenius_distance_sq(const DenseMatrix& a, const DenseMatrix& b);
double trace(const DenseMatrix& a);

/// First `count` columns of `a`.
DenseMatrix leading_columns(const DenseMatrix& a, std::size_t count);
/// Scales column t of `a` by weights[t].
DenseMatrix scale_columns(const DenseMatrix& a, std::span<const double> weights);

/// ||A^T A - I||_F.
double orthonormality_residual(const DenseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y);

/// Throws ValidationError if any entry is NaN or infinite.
void require_finite(const DenseMatrix& a, const char* what);

} // namespace fastortho
