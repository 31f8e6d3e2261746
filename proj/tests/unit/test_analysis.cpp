#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fastortho/analysis.hpp"
#include "fastortho/error.hpp"
#include "fastortho/factorizer.hpp"
#include "fastortho/linalg.hpp"
#include "support.hpp"

using namespace fastortho;

namespace {

// Largest singular value of E by power iteration on E^T E.
double power_norm(const DenseMatrix& e) {
    const DenseMatrix ete = matmul_tn(e, e);
    std::vector<double> v(e.cols(), 1.0);
    v[0] = 1.7;
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it) {
        std::vector<double> w(v.size(), 0.0);
        for (std::size_t c = 0; c < v.size(); ++c)
            for (std::size_t r = 0; r < v.size(); ++r) w[r] += ete(r, c) * v[c];
        const double norm = std::sqrt(dot(w, w));
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = w[k] / norm;
        if (std::abs(norm - lambda) <= 1e-15 * norm) break;
        lambda = norm;
    }
    return std::sqrt(lambda);
}

GivensProduct from_dense_free(std::size_t d, std::size_t p) {
    GivensProduct prod;
    prod.d = d;
    prod.p = p;
    prod.weights = DiagonalWeights::ones(d, p);
    return prod;
}

} // namespace

TEST_CASE("error_report of an exact factorisation") {
    const GivensProduct prod = from_dense_free(6, 3);
    DenseMatrix u(6, 3);
    for (std::size_t t = 0; t < 3; ++t) u(t, t) = 1.0;
    const ErrorReport r = error_report(u, prod, DiagonalWeights::ones(6, 3));
    CHECK(r.frobenius_sq == 0.0);
    CHECK(r.operator_norm == doctest::Approx(0.0));
    CHECK(r.principal_angle_rad == 0.0);
    CHECK(r.cosine_min == 1.0);
    CHECK(r.off_norm == 0.0);
    CHECK(r.operator_norm_bound == 0.0);
    CHECK(r.operator_norm_bound_applies);
}

TEST_CASE("error_report of the antipodal case") {
    // U = -I against the empty product.
    const std::size_t d = 5;
    DenseMatrix u = DenseMatrix::identity(d);
    for (double& v : u.data()) v = -v;
    const ErrorReport r = error_report(u, from_dense_free(d, d), DiagonalWeights::ones(d, d));
    CHECK(r.frobenius_sq == doctest::Approx(4.0 * d));
    CHECK(r.normalized_frobenius == doctest::Approx(2.0));
    CHECK(r.operator_norm == doctest::Approx(2.0));
    CHECK_FALSE(r.operator_norm_bound_applies);
    CHECK(r.operator_norm_bound == 2.0);
}

TEST_CASE("error_report against oracles") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t d = 12, p = seed % 2 == 0 ? 12 : 5;
        const DenseMatrix u = leading_columns(haar_orthogonal(d, seed), p);
        Rng rng(seed);
        DiagonalWeights sigma{d, {}};
        for (std::size_t t = 0; t < p; ++t) sigma.values.push_back(0.2 + 3.0 * rng.uniform());
        FactorizerConfig cfg;
        cfg.g = 20;
        cfg.sigma_rule = SigmaRule::Original;
        const GivensProduct prod = factorize(u, sigma, cfg);
        const ErrorReport r = error_report(u, prod, sigma);

        const DenseMatrix ubar_p = leading_columns(dense_orthogonal(prod), p);
        DenseMatrix e = matmul_tn(u, ubar_p);
        for (double& v : e.data()) v = -v;
        for (std::size_t t = 0; t < p; ++t) e(t, t) += 1.0;
        CHECK(std::abs(r.operator_norm - power_norm(e)) <= 1e-8);
        CHECK(r.operator_norm <= 2.0 + 1e-12);
        CHECK(r.principal_angle_rad >= 0.0);
        CHECK(r.principal_angle_rad <= std::numbers::pi / 2);
        CHECK(std::abs(r.weighted_frobenius_sq - r.cosine_identity) <= 1e-9);
        CHECK(std::abs(r.objective - prod.log.sweeps.back().objective) <= 1e-9);
        CHECK(r.normalized_frobenius == doctest::Approx(r.frobenius_sq / (2.0 * d)));
        for (double c : r.cosines) {
            CHECK(c >= -1.0);
            CHECK(c <= 1.0);
        }
        if (r.operator_norm_bound_applies && p == d) CHECK(r.operator_norm <= r.operator_norm_bound + 1e-12);
    }
}

TEST_CASE("off_norm") {
    CHECK(off_norm(DenseMatrix::identity(4)) == 0.0);
    CHECK(off_norm(DenseMatrix::from_rows({{0, 1}, {1, 0}})) == doctest::Approx(std::sqrt(2.0)));
    const DenseMatrix u = haar_orthogonal(50, 3);
    double sum = 0.0;
    for (std::size_t t = 0; t < 50; ++t)
        for (std::size_t q = 0; q < 50; ++q)
            if (t != q) sum += u(t, q) * u(t, q);
    CHECK(std::abs(off_norm(u) - std::sqrt(sum)) <= 1e-12);
    CHECK_THROWS_AS(off_norm(DenseMatrix(2, 3)), ShapeError);
}

TEST_CASE("half_budget_bound") {
    CHECK(half_budget_bound(50) == doctest::Approx(100.0 - std::sqrt(100.0 * std::numbers::pi)));
    CHECK(half_budget_bound(50) == doctest::Approx(82.2751).epsilon(1e-5));
    CHECK(half_budget_bound(2) == doctest::Approx(0.4551).epsilon(1e-3));
    for (std::size_t d = 2; d < 200; ++d) CHECK(half_budget_bound(d + 1) > half_budget_bound(d));
    CHECK_THROWS_AS(half_budget_bound(1), DomainError);
}

TEST_CASE("budget_bound") {
    const double tail = 2.0 - 2.0 * std::sqrt(2.0) / std::sqrt(std::numbers::pi);
    for (std::size_t d : {2u, 5u, 50u, 100u}) CHECK(budget_bound(d, d * (d - 1) / 2) == doctest::Approx(tail));
    CHECK(tail == doctest::Approx(0.4043).epsilon(1e-3));
    const double mid = budget_bound(100, 1328);
    CHECK(std::isfinite(mid));
    CHECK(mid > 0.0);
    for (std::size_t d : {10u, 50u}) {
        double previous = 1e300;
        for (std::size_t g = 1; g <= d * (d - 1) / 2; ++g) {
            const double b = budget_bound(d, g);
            CHECK(b <= previous + 1e-12);
            previous = b;
        }
    }
    CHECK_THROWS_AS(budget_bound(10, 46), DomainError);
}

TEST_CASE("operator_norm_bound") {
    const std::vector<double> exact(5, 1.0);
    CHECK(operator_norm_bound(exact, 5).value == 0.0);
    const std::vector<double> zero{0.0, 0.5};
    const auto b = operator_norm_bound(zero, 2);
    CHECK(b.value == doctest::Approx(2.0));
    CHECK(b.assumption_holds);
    const std::vector<double> negative{0.9, -0.1};
    CHECK_FALSE(operator_norm_bound(negative, 2).assumption_holds);
    CHECK(operator_norm_bound(negative, 2).value == 2.0);
    const std::vector<double> out{1.5};
    CHECK_THROWS_AS(operator_norm_bound(out, 1), DomainError);
}

TEST_CASE("eigenvalues of small matrices") {
    const auto diag = eigenvalues(DenseMatrix::from_rows({{2, 0}, {0, -3}}));
    CHECK(diag.size() == 2);
    const auto rot = eigenvalues(DenseMatrix::from_rows({{0, -1}, {1, 0}}));
    for (const auto& z : rot) {
        CHECK(std::abs(z.real()) <= 1e-14);
        CHECK(std::abs(std::abs(z.imag()) - 1.0) <= 1e-14);
    }
    // Companion matrix of (x-1)(x-2)(x-3)(x-4).
    const auto roots = eigenvalues(DenseMatrix::from_rows({{10, -35, 50, -24}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}));
    std::vector<double> re;
    for (const auto& z : roots) {
        CHECK(std::abs(z.imag()) <= 1e-9);
        re.push_back(z.real());
    }
    std::sort(re.begin(), re.end());
    for (int k = 0; k < 4; ++k) CHECK(re[k] == doctest::Approx(k + 1.0).epsilon(1e-9));
}

TEST_CASE("error spectrum lies on the unit circle around one") {
    const DenseMatrix u = haar_orthogonal(20, 1);
    for (const auto& z : error_spectrum(u, u)) CHECK(std::abs(z) <= 1e-12);
    DenseMatrix neg = u;
    for (double& v : neg.data()) v = -v;
    for (const auto& z : error_spectrum(u, neg)) CHECK(std::abs(z - 2.0) <= 1e-12);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto z = error_spectrum(haar_orthogonal(20, 100 + seed), haar_orthogonal(20, 200 + seed));
        CHECK(z.size() == 20);
        for (const auto& v : z) CHECK(std::abs(std::abs(v - 1.0) - 1.0) <= 1e-8);
    }
    CHECK_THROWS_AS(error_spectrum(u, DenseMatrix(20, 20, 1.0)), ValidationError);
    CHECK_THROWS_AS(error_spectrum(u, DenseMatrix::identity(3)), ShapeError);
}

TEST_CASE("error report JSON field names") {
    DenseMatrix u(4, 2);
    u(0, 0) = u(1, 1) = 1.0;
    const auto j = to_json(error_report(u, from_dense_free(4, 2), DiagonalWeights::ones(4, 2)));
    for (const char* key : {"frobenius_sq", "normalized_frobenius", "operator_norm", "principal_angle_rad", "cosines",
                            "cosine_min", "cosine_mean", "cosine_max", "off_norm"})
        CHECK(j.contains(key));
}
