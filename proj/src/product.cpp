#include "fastortho/product.hpp"

#include <cstring>
#include <string>

#include "fastortho/error.hpp"

namespace fastortho {

std::string_view to_string(SigmaRule rule) {
    switch (rule) {
    case SigmaRule::Identity: return "identity";
    case SigmaRule::Original: return "original";
    case SigmaRule::Update: return "update";
    }
    return "unknown";
}

std::optional<SigmaRule> parse_sigma_rule(std::string_view text) {
    if (text == "identity") return SigmaRule::Identity;
    if (text == "original") return SigmaRule::Original;
    if (text == "update") return SigmaRule::Update;
    return std::nullopt;
}

void FactorizerConfig::validate() const {
    if (g < 1) throw ValidationError("factorizer: g must be at least 1");
    if (!(epsilon > 0.0)) throw ValidationError("factorizer: epsilon must be positive");
    if (max_sweeps < 1) throw ValidationError("factorizer: max_sweeps must be positive");
}

void validate(const GivensProduct& product) {
    if (product.p > product.d) throw ShapeError("product: p exceeds d");
    if (product.weights.p() != product.p || product.weights.d != product.d) {
        throw ShapeError("product: weight vector does not match (d, p)");
    }
    for (const auto& g : product.transforms) validate(g, product.d);
}

DenseMatrix dense_orthogonal(const GivensProduct& product) {
    DenseMatrix u = DenseMatrix::identity(product.d);
    for (auto it = product.transforms.rbegin(); it != product.transforms.rend(); ++it)
        apply_left(*it, u, false);
    return u;
}

DenseMatrix dense_operator(const GivensProduct& product) {
    DenseMatrix m = product.weights.dense();
    for (auto it = product.transforms.rbegin(); it != product.transforms.rend(); ++it)
        apply_left(*it, m, false);
    return m;
}

bool same_operator(const GivensProduct& a, const GivensProduct& b) {
    auto bits_equal = [](double x, double y) { return std::memcmp(&x, &y, sizeof(double)) == 0; };
    if (a.d != b.d || a.p != b.p || a.sigma_rule != b.sigma_rule || a.g() != b.g()) return false;
    for (std::size_t k = 0; k < a.g(); ++k) {
        const auto& x = a.transforms[k];
        const auto& y = b.transforms[k];
        if (x.i != y.i || x.j != y.j || x.kind != y.kind || !bits_equal(x.c, y.c) || !bits_equal(x.s, y.s))
            return false;
    }
    for (std::size_t t = 0; t < a.p; ++t)
        if (!bits_equal(a.weights.values[t], b.weights.values[t])) return false;
    return true;
}

} // namespace fastortho
