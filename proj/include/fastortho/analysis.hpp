#pragma once

#include <complex>
#include <span>
#include <vector>

#include <json.hpp>

#include "fastortho/matrix.hpp"
#include "fastortho/product.hpp"

namespace fastortho {

/// Approximation-error measures between U_p and the first p columns of U_bar.
struct ErrorReport {
    double frobenius_sq = 0.0;         ///< ||U_p - U_bar_p||_F^2
    double normalized_frobenius = 0.0; ///< frobenius_sq / (2d)
    double operator_norm = 0.0;        ///< ||I_p - U_p^T U_bar_p||_2
    double principal_angle_rad = 0.0; ///< arccos of the smallest singular value of U_p^T U_bar_p
    std::vector<double> cosines;       ///< u_i^T ubar_i
    double cosine_min = 0.0;
    double cosine_mean = 0.0;
    double cosine_max = 0.0;
    double off_norm = 0.0; ///< off(U_p^T U_bar_p)

    double objective = 0.0;             ///< ||U_p Sigma_p - U_bar Sigma_bar_p||_F^2
    double weighted_frobenius_sq = 0.0; ///< ||(U_p - U_bar_p) Sigma_p||_F^2
    double cosine_identity = 0.0;       ///< 2 sum sigma_i^2 (1 - cos theta_i)
    double one_minus_operator_norm = 0.0;
    double operator_norm_bound = 2.0;
    bool operator_norm_bound_applies = false; ///< every cosine was non-negative
};

ErrorReport error_report(const DenseMatrix& u_p, const GivensProduct& product, const DiagonalWeights& sigma);

nlohmann::ordered_json to_json(const ErrorReport& report);

/// sqrt(||U||_F^2 - sum_t U_tt^2) for square U.
double off_norm(const DenseMatrix& u);

/// 2d - sqrt(2 pi d): expected-error bound with d/2 transforms.
double half_budget_bound(std::size_t d);

/// 2(d - floor r) - (2 sqrt 2 / sqrt pi) sqrt(d - floor r),
/// r = d - (1 + sqrt((2d-1)^2 - 8g)) / 2. Requires g <= d(d-1)/2.
double budget_bound(std::size_t d, std::size_t g);

struct OperatorNormBound {
    double value = 2.0;
    bool assumption_holds = false; ///< all cosines were non-negative
};

/// min(2, 1 - c_min + sqrt((d-1)(1 - c_min^2))) when every cosine is >= 0;
/// otherwise the trivial bound 2 with assumption_holds = false.
OperatorNormBound operator_norm_bound(std::span<const double> cosines, std::size_t d);

/// Eigenvalues of E = I - U^T U_bar for orthonormal square U, U_bar.
std::vector<std::complex<double>> error_spectrum(const DenseMatrix& u, const DenseMatrix& u_bar);

/// Eigenvalues of a general real square matrix (Householder Hessenberg reduction
/// followed by Francis double-shift QR).
std::vector<std::complex<double>> eigenvalues(const DenseMatrix& a);

} // namespace fastortho
