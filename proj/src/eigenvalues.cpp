#include <cmath>

#include "fastortho/analysis.hpp"
#include "fastortho/error.hpp"

namespace fastortho {

namespace {

void reduce_to_hessenberg(DenseMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<double> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t r = k + 1; r < n; ++r) norm2 += a(r, k) * a(r, k);
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) continue;
        const double alpha = a(k + 1, k) >= 0.0 ? -norm : norm;
        std::fill(v.begin(), v.end(), 0.0);
        for (std::size_t r = k + 1; r < n; ++r) v[r] = a(r, k);
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t r = k + 1; r < n; ++r) vnorm2 += v[r] * v[r];
        if (vnorm2 == 0.0) continue;
        const double scale = 2.0 / vnorm2;
        // A <- H A
        for (std::size_t c = 0; c < n; ++c) {
            double proj = 0.0;
            for (std::size_t r = k + 1; r < n; ++r) proj += v[r] * a(r, c);
            proj *= scale;
            for (std::size_t r = k + 1; r < n; ++r) a(r, c) -= proj * v[r];
        }
        // A <- A H
        for (std::size_t r = 0; r < n; ++r) {
            double proj = 0.0;
            for (std::size_t c = k + 1; c < n; ++c) proj += a(r, c) * v[c];
            proj *= scale;
            for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= proj * v[c];
        }
        for (std::size_t r = k + 2; r < n; ++r) a(r, k) = 0.0;
    }
}

double sign_of(double magnitude, double sign) { return sign >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude); }

} // namespace

std::vector<std::complex<double>> eigenvalues(const DenseMatrix& input) {
    if (input.rows() != input.cols()) throw ShapeError("eigenvalues: matrix must be square");
    require_finite(input, "eigenvalues");
    const int n = static_cast<int>(input.rows());
    DenseMatrix h = input;
    reduce_to_hessenberg(h);
    // 1-based accessor keeps the classical hqr indexing readable.
    auto a = [&h](int i, int j) -> double& { return h(i - 1, j - 1); };

    std::vector<double> wr(n + 1), wi(n + 1);
    double anorm = 0.0;
    for (int i = 1; i <= n; ++i)
        for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(a(i, j));

    constexpr int kMaxIterations = 60;
    int nn = n;
    double t = 0.0;
    double p = 0, q = 0, r = 0, s = 0, w = 0, x = 0, y = 0, z = 0;
    while (nn >= 1) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 2; --l) {
                s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) + s == s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            x = a(nn, nn);
            if (l == nn) {
                wr[nn] = x + t;
                wi[nn--] = 0.0;
            } else {
                y = a(nn - 1, nn - 1);
                w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        wr[nn - 1] = wr[nn] = x + z;
                        if (z != 0.0) wr[nn] = x - w / z;
                        wi[nn - 1] = wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = wr[nn] = x + p;
                        wi[nn] = z;
                        wi[nn - 1] = -z;
                    }
                    nn -= 2;
                } else {
                    if (its == kMaxIterations) {
                        throw ConvergenceError("eigenvalues: QR iteration did not converge",
                                               std::abs(a(nn, nn - 1)));
                    }
                    if (its == 10 || its == 20 || its == 40) {
                        // Exceptional shift.
                        t += x;
                        for (int i = 1; i <= nn; ++i) a(i, i) -= x;
                        s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m;
                    for (m = nn - 2; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
                        if (u + v == v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        a(i, i - 2) = 0.0;
                        if (i != m + 2) a(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k != nn - 1) r = a(k + 2, k - 1);
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
                            if (k == m) {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            } else {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k != nn - 1) {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * y;
                                a(k, j) -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a(i, k) + y * a(i, k + 1);
                                if (k != nn - 1) {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }

    std::vector<std::complex<double>> out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i) out.emplace_back(wr[i], wi[i]);
    return out;
}

} // namespace fastortho
