#include "fastortho/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fastortho/error.hpp"
#include "fastortho/linalg.hpp"

namespace fastortho {

ErrorReport error_report(const DenseMatrix& u_p, const GivensProduct& product, const DiagonalWeights& sigma) {
    validate(product);
    const std::size_t d = product.d;
    const std::size_t p = product.p;
    if (u_p.rows() != d || u_p.cols() != p) throw ShapeError("error_report: U_p must be d x p of the product");
    if (sigma.p() != p) throw ShapeError("error_report: sigma must hold p weights");

    const DenseMatrix u_bar = dense_orthogonal(product);
    const DenseMatrix u_bar_p = leading_columns(u_bar, p);

    ErrorReport r;
    r.frobenius_sq = frobenius_distance_sq(u_p, u_bar_p);
    r.normalized_frobenius = r.frobenius_sq / (2.0 * static_cast<double>(d));

    const DenseMatrix cross = matmul_tn(u_p, u_bar_p); // U_p^T U_bar_p
    DenseMatrix e(p, p);
    for (std::size_t c = 0; c < p; ++c)
        for (std::size_t row = 0; row < p; ++row) e(row, c) = (row == c ? 1.0 : 0.0) - cross(row, c);
    r.operator_norm = singular_values(e).front();
    r.one_minus_operator_norm = 1.0 - r.operator_norm;

    const std::vector<double> tau = singular_values(cross);
    r.principal_angle_rad = std::acos(std::clamp(tau.back(), 0.0, 1.0));

    r.cosines.resize(p);
    for (std::size_t t = 0; t < p; ++t) r.cosines[t] = std::clamp(cross(t, t), -1.0, 1.0);
    r.cosine_min = *std::min_element(r.cosines.begin(), r.cosines.end());
    r.cosine_max = *std::max_element(r.cosines.begin(), r.cosines.end());
    double sum = 0.0;
    for (double c : r.cosines) sum += c;
    r.cosine_mean = sum / static_cast<double>(p);

    double off_sq = 0.0;
    for (std::size_t c = 0; c < p; ++c)
        for (std::size_t row = 0; row < p; ++row)
            if (row != c) off_sq += cross(row, c) * cross(row, c);
    r.off_norm = std::sqrt(off_sq);

    r.objective = frobenius_distance_sq(scale_columns(u_p, sigma.values), dense_operator(product));
    r.weighted_frobenius_sq = 0.0;
    r.cosine_identity = 0.0;
    for (std::size_t t = 0; t < p; ++t) {
        const double w2 = sigma.values[t] * sigma.values[t];
        double col = 0.0;
        for (std::size_t row = 0; row < d; ++row) {
            const double diff = u_p(row, t) - u_bar_p(row, t);
            col += diff * diff;
        }
        r.weighted_frobenius_sq += w2 * col;
        r.cosine_identity += 2.0 * w2 * (1.0 - cross(t, t));
    }

    const OperatorNormBound bound = operator_norm_bound(r.cosines, d);
    r.operator_norm_bound = bound.value;
    r.operator_norm_bound_applies = bound.assumption_holds;
    return r;
}

nlohmann::ordered_json to_json(const ErrorReport& r) {
    return nlohmann::ordered_json{
        {"frobenius_sq", r.frobenius_sq},
        {"normalized_frobenius", r.normalized_frobenius},
        {"operator_norm", r.operator_norm},
        {"principal_angle_rad", r.principal_angle_rad},
        {"cosines", r.cosines},
        {"cosine_min", r.cosine_min},
        {"cosine_mean", r.cosine_mean},
        {"cosine_max", r.cosine_max},
        {"off_norm", r.off_norm},
        {"objective", r.objective},
        {"weighted_frobenius_sq", r.weighted_frobenius_sq},
        {"cosine_identity", r.cosine_identity},
        {"one_minus_operator_norm", r.one_minus_operator_norm},
        {"operator_norm_bound", r.operator_norm_bound},
        {"operator_norm_bound_applies", r.operator_norm_bound_applies},
    };
}

double off_norm(const DenseMatrix& u) {
    if (u.rows() != u.cols()) throw ShapeError("off_norm: matrix must be square");
    double diag = 0.0;
    for (std::size_t t = 0; t < u.rows(); ++t) diag += u(t, t) * u(t, t);
    return std::sqrt(std::max(0.0, frobenius_norm_sq(u) - diag));
}

double half_budget_bound(std::size_t d) {
    if (d < 2) throw DomainError("half_budget_bound: d must be at least 2");
    const double dd = static_cast<double>(d);
    return 2.0 * dd - std::sqrt(2.0 * std::numbers::pi * dd);
}

double budget_bound(std::size_t d, std::size_t g) {
    if (d < 2) throw DomainError("budget_bound: d must be at least 2");
    const double dd = static_cast<double>(d);
    const double g_max = dd * (dd - 1.0) / 2.0;
    if (static_cast<double>(g) > g_max) throw DomainError("budget_bound: g exceeds d(d-1)/2");
    const double r = dd - (1.0 + std::sqrt((2.0 * dd - 1.0) * (2.0 * dd - 1.0) - 8.0 * static_cast<double>(g))) / 2.0;
    // r is an integer at g = d(d-1)/2 and at other triangular budgets; absorb rounding below it.
    const double remaining = dd - std::floor(r + 1e-9);
    return 2.0 * remaining - 2.0 * std::numbers::sqrt2 / std::sqrt(std::numbers::pi) * std::sqrt(remaining);
}

OperatorNormBound operator_norm_bound(std::span<const double> cosines, std::size_t d) {
    if (cosines.empty()) throw DomainError("operator_norm_bound: no cosines");
    double c_min = 1.0;
    bool non_negative = true;
    for (double c : cosines) {
        if (!(c >= -1.0 - 1e-12 && c <= 1.0 + 1e-12)) throw DomainError("operator_norm_bound: cosine outside [-1, 1]");
        c = std::clamp(c, -1.0, 1.0);
        if (c < 0.0) non_negative = false;
        c_min = std::min(c_min, c);
    }
    if (!non_negative) return {2.0, false};
    const double value = 1.0 - c_min + std::sqrt(static_cast<double>(d - 1) * (1.0 - c_min * c_min));
    return {std::min(2.0, value), true};
}

std::vector<std::complex<double>> error_spectrum(const DenseMatrix& u, const DenseMatrix& u_bar) {
    if (u.rows() != u.cols() || u_bar.rows() != u_bar.cols() || u.rows() != u_bar.rows())
        throw ShapeError("error_spectrum: inputs must be square and of equal size");
    const double ru = orthonormality_residual(u);
    const double rb = orthonormality_residual(u_bar);
    if (ru > 1e-8 || rb > 1e-8) throw ValidationError("error_spectrum: inputs must be orthonormal", std::max(ru, rb));
    std::vector<std::complex<double>> z = eigenvalues(matmul_tn(u, u_bar));
    for (auto& v : z) v = 1.0 - v;
    return z;
}

} // namespace fastortho
