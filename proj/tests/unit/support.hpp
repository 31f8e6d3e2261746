#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "fastortho/givens.hpp"
#include "fastortho/linalg.hpp"
#include "fastortho/matrix.hpp"
#include "fastortho/product.hpp"
#include "fastortho/random.hpp"

namespace testing {

inline fastortho::DenseMatrix gaussian(std::size_t rows, std::size_t cols, fastortho::Rng& rng) {
    fastortho::DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = rng.normal();
    return m;
}

inline std::vector<double> gaussian_vector(std::size_t n, fastortho::Rng& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

inline fastortho::ExtendedGivens random_transform(std::size_t d, fastortho::Rng& rng) {
    std::size_t i = rng.below(d);
    std::size_t j = rng.below(d - 1);
    if (j >= i) ++j;
    if (i > j) std::swap(i, j);
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    const auto kind = rng.below(2) == 0 ? fastortho::TransformKind::Rotation : fastortho::TransformKind::Reflector;
    return {i, j, std::cos(angle), std::sin(angle), kind};
}

inline fastortho::GivensProduct random_product(std::size_t d, std::size_t p, std::size_t g, fastortho::Rng& rng) {
    fastortho::GivensProduct prod;
    prod.d = d;
    prod.p = p;
    for (std::size_t k = 0; k < g; ++k) prod.transforms.push_back(random_transform(d, rng));
    prod.weights.d = d;
    for (std::size_t t = 0; t < p; ++t) prod.weights.values.push_back(0.5 + rng.uniform());
    return prod;
}

inline double max_abs_diff(const fastortho::DenseMatrix& a, const fastortho::DenseMatrix& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
    return worst;
}

} // namespace testing
