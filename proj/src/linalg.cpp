#include "fastortho/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fastortho/error.hpp"
#include "fastortho/random.hpp"

namespace fastortho {

namespace {

void rotate_columns(DenseMatrix& m, std::size_t i, std::size_t j, double c, double s) {
    auto ci = m.column(i);
    auto cj = m.column(j);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double a = ci[r];
        const double b = cj[r];
        ci[r] = c * a - s * b;
        cj[r] = s * a + c * b;
    }
}

// Orthogonalises `x` against the first `count` columns of `basis` (two MGS passes)
// and returns its remaining norm.
double orthogonalize(std::vector<double>& x, const DenseMatrix& basis, std::size_t count) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < count; ++k) {
            const double proj = dot(x, basis.column(k));
            auto bk = basis.column(k);
            for (std::size_t r = 0; r < x.size(); ++r) x[r] -= proj * bk[r];
        }
    }
    return std::sqrt(dot(x, x));
}

SvdResult svd_tall(const DenseMatrix& a, const SvdOptions& options) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const double tol = options.tolerance > 0.0
                           ? options.tolerance
                           : std::numeric_limits<double>::epsilon() * static_cast<double>(m);

    DenseMatrix w = a;
    DenseMatrix v = DenseMatrix::identity(n);
    // Pairs of columns that are pure rounding noise never meet the relative test.
    const double eps = std::numeric_limits<double>::epsilon();
    const double negligible = eps * eps * dot(a.data(), a.data());

    bool converged = n < 2;
    double worst = 0.0;
    for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        worst = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double alpha = dot(w.column(i), w.column(i));
                const double beta = dot(w.column(j), w.column(j));
                const double gamma = dot(w.column(i), w.column(j));
                const double scale = std::sqrt(alpha * beta);
                if (std::abs(gamma) <= negligible || std::abs(gamma) <= tol * scale) continue;
                worst = std::max(worst, std::abs(gamma) / scale);
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t =
                    std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_columns(w, i, j, c, s);
                rotate_columns(v, i, j, c, s);
                rotated = true;
            }
        }
        converged = !rotated;
    }
    if (!converged) {
        throw ConvergenceError("svd_dense: no convergence after " +
                                   std::to_string(options.max_sweeps) + " sweeps",
                               worst);
    }

    std::vector<double> norms(n);
    for (std::size_t k = 0; k < n; ++k) norms[k] = std::sqrt(dot(w.column(k), w.column(k)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    SvdResult out{DenseMatrix(m, n), std::vector<double>(n), DenseMatrix(n, n)};
    const double smax = n > 0 ? norms[order[0]] : 0.0;
    const double floor = smax * std::numeric_limits<double>::epsilon() * static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.s[k] = norms[src];
        std::copy_n(v.column(src).begin(), n, out.v.column(k).begin());

        std::vector<double> col(w.column(src).begin(), w.column(src).end());
        if (norms[src] > floor && norms[src] > 0.0) {
            for (double& x : col) x /= norms[src];
            if (norms[src] > std::sqrt(floor * smax)) {
                std::copy(col.begin(), col.end(), out.u.column(k).begin());
                continue;
            }
        } else {
            std::fill(col.begin(), col.end(), 0.0);
        }
        // Rank-deficient direction: complete the basis orthonormally.
        double len = orthogonalize(col, out.u, k);
        if (len < 0.5) {
            // Some unit vector keeps a residual of at least sqrt((m - k) / m).
            std::vector<double> trial(m);
            len = 0.0;
            for (std::size_t e = 0; e < m; ++e) {
                std::fill(trial.begin(), trial.end(), 0.0);
                trial[e] = 1.0;
                const double trial_len = orthogonalize(trial, out.u, k);
                if (trial_len > len) {
                    len = trial_len;
                    col = trial;
                }
            }
        }
        for (std::size_t r = 0; r < m; ++r) out.u(r, k) = col[r] / len;
    }
    return out;
}

} // namespace

SvdResult svd_dense(const DenseMatrix& a, const SvdOptions& options) {
    if (a.rows() == 0 || a.cols() == 0) throw ShapeError("svd_dense: empty matrix");
    require_finite(a, "svd_dense");
    if (a.rows() >= a.cols()) return svd_tall(a, options);
    SvdResult t = svd_tall(transpose(a), options);
    return SvdResult{std::move(t.v), std::move(t.s), std::move(t.u)};
}

std::vector<double> singular_values(const DenseMatrix& a) { return svd_dense(a).s; }

DenseMatrix haar_orthogonal(std::size_t d, std::uint64_t seed) {
    if (d == 0) throw ValidationError("haar_orthogonal: d must be positive");
    Rng rng(seed);
    DenseMatrix gauss(d, d);
    for (double& x : gauss.data()) x = rng.normal();

    for (;;) {
        DenseMatrix a = gauss;
        DenseMatrix reflectors(d, d); // column k holds the unit Householder vector (rows k..d-1)
        std::vector<double> r_diag(d);
        std::size_t degenerate = d;

        for (std::size_t k = 0; k < d; ++k) {
            double norm2 = 0.0;
            for (std::size_t r = k; r < d; ++r) norm2 += a(r, k) * a(r, k);
            const double norm = std::sqrt(norm2);
            if (!(norm > 1e-300)) {
                degenerate = k;
                break;
            }
            const double alpha = a(k, k) >= 0.0 ? -norm : norm;
            auto vk = reflectors.column(k);
            for (std::size_t r = k; r < d; ++r) vk[r] = a(r, k);
            vk[k] -= alpha;
            double vnorm2 = 0.0;
            for (std::size_t r = k; r < d; ++r) vnorm2 += vk[r] * vk[r];
            const double vnorm = std::sqrt(vnorm2);
            for (std::size_t r = k; r < d; ++r) vk[r] /= vnorm;
            r_diag[k] = alpha;
            for (std::size_t j = k + 1; j < d; ++j) {
                auto aj = a.column(j);
                double proj = 0.0;
                for (std::size_t r = k; r < d; ++r) proj += vk[r] * aj[r];
                proj *= 2.0;
                for (std::size_t r = k; r < d; ++r) aj[r] -= proj * vk[r];
            }
        }
        if (degenerate < d) {
            // Probability-zero event; redraw the offending column and refactor.
            for (std::size_t r = 0; r < d; ++r) gauss(r, degenerate) = rng.normal();
            continue;
        }

        DenseMatrix q = DenseMatrix::identity(d);
        for (std::size_t kk = d; kk-- > 0;) {
            auto vk = reflectors.column(kk);
            for (std::size_t j = kk; j < d; ++j) {
                auto qj = q.column(j);
                double proj = 0.0;
                for (std::size_t r = kk; r < d; ++r) proj += vk[r] * qj[r];
                proj *= 2.0;
                for (std::size_t r = kk; r < d; ++r) qj[r] -= proj * vk[r];
            }
        }
        for (std::size_t k = 0; k < d; ++k) {
            // Q diag(sign R_kk) is Haar; the second flip makes the diagonal non-negative.
            double flip = r_diag[k] < 0.0 ? -1.0 : 1.0;
            if (q(k, k) * flip < 0.0) flip = -flip;
            if (flip < 0.0)
                for (double& x : q.column(k)) x = -x;
        }
        return q;
    }
}

} // namespace fastortho
