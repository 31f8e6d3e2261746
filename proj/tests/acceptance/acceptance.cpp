#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fastortho/analysis.hpp"
#include "fastortho/error.hpp"
#include "fastortho/factorizer.hpp"
#include "fastortho/fast_apply.hpp"
#include "fastortho/givens.hpp"
#include "fastortho/linalg.hpp"
#include "fastortho/pca.hpp"
#include "fastortho/product_io.hpp"
#include "fastortho/synthetic.hpp"
#include "support.hpp"

using namespace fastortho;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::pair<std::size_t, std::size_t> random_pair(std::size_t d, Rng& rng) {
    std::size_t i = rng.below(d);
    std::size_t j = rng.below(d - 1);
    if (j >= i) ++j;
    if (i > j) std::swap(i, j);
    return {i, j};
}

// Explicit product G_1 ... G_g from dense factors.
DenseMatrix dense_product_oracle(const GivensProduct& product) {
    DenseMatrix u = DenseMatrix::identity(product.d);
    for (const auto& g : product.transforms) u = matmul(u, to_dense(g, product.d));
    return u;
}

// ||L - G N||_F^2 where G acts on rows i and j with block [[a, b], [c, e]].
double pair_error(const DenseMatrix& l, const DenseMatrix& n, double base, std::size_t i, std::size_t j, double a,
                  double b, double c, double e) {
    double err = base;
    for (std::size_t t = 0; t < l.cols(); ++t) {
        const double ri = l(i, t) - (a * n(i, t) + b * n(j, t));
        const double rj = l(j, t) - (c * n(i, t) + e * n(j, t));
        err += ri * ri + rj * rj;
    }
    return err;
}

Outcome local_optimality() {
    constexpr int kGrid = 3600;
    constexpr double kTol = 1e-5;
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> cs(kGrid), sn(kGrid);
    for (int k = 0; k < kGrid; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / kGrid;
        cs[k] = std::cos(angle);
        sn[k] = std::sin(angle);
    }
    Rng rng(101);
    double worst = -1e300;
    double loosest = 0.0;
    for (int inst = 0; inst < 1000; ++inst) {
        const std::size_t d = inst % 2 == 0 ? 4 : 8;
        const std::size_t p = (inst / 2) % 2 == 0 ? 2 : d;
        const DenseMatrix l = testing::gaussian(d, p, rng);
        const DenseMatrix n = testing::gaussian(d, p, rng);
        const DenseMatrix z = matmul(l, transpose(n));
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i + 1; j < d; ++j) {
                double base = 0.0;
                for (std::size_t r = 0; r < d; ++r) {
                    if (r == i || r == j) continue;
                    for (std::size_t t = 0; t < p; ++t) base += std::pow(l(r, t) - n(r, t), 2);
                }
                const ExtendedGivens g = optimal_transform(block_of(z, i, j), i, j).transform;
                const double chosen = frobenius_distance_sq(l, matmul(to_dense(g, d), n));
                double best_grid = 1e300;
                for (int k = 0; k < kGrid; ++k) {
                    const double c = cs[k], s = sn[k];
                    best_grid = std::min(best_grid, pair_error(l, n, base, i, j, c, -s, s, c));
                    best_grid = std::min(best_grid, pair_error(l, n, base, i, j, c, s, s, -c));
                }
                worst = std::max(worst, chosen - best_grid);
                loosest = std::max(loosest, best_grid - chosen);
            }
        }
    }
    const double secs = seconds_since(start);
    return {worst <= kTol && secs < 30.0,
            fmt("max(chosen - grid best) = %.3e, max(grid best - chosen) = %.3e, %.1fs of 30s", worst, loosest,
                secs)};
}

Outcome trace_identity() {
    Rng rng(202);
    double worst = 0.0;
    for (std::uint64_t n = 0; n < 10000; ++n) {
        const std::size_t d = 2 + n % 15;
        const DenseMatrix u = haar_orthogonal(d, 10000 + n);
        const auto [i, j] = random_pair(d, rng);
        const Block2 b = block_of(u, i, j);
        const ExtendedGivens g = optimal_transform(b, i, j).transform;
        const double lhs = trace(matmul(u, transpose(to_dense(g, d))));
        worst = std::max(worst, std::abs(lhs - (trace(u) + score(b))));
    }
    return {worst <= 1e-10, fmt("max |tr(U G^T) - tr(U) - C| = %.3e", worst)};
}

Outcome monotone_objective() {
    FactorizerConfig config;
    config.g = 100;
    config.record_steps = true;
    double worst_rise = 0.0;
    bool termination_ok = true;
    int total_sweeps = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DenseMatrix u = haar_orthogonal(50, seed);
        const GivensProduct prod = factorize(u, DiagonalWeights::ones(50, 50), config);
        const auto& steps = prod.log.step_objectives;
        for (std::size_t k = 1; k < steps.size(); ++k)
            worst_rise = std::max(worst_rise, (steps[k] - steps[k - 1]) / std::max(1.0, steps[k - 1]));
        const auto& sweeps = prod.log.sweeps;
        for (std::size_t k = 1; k < sweeps.size(); ++k)
            worst_rise = std::max(worst_rise, (sweeps[k].objective - sweeps[k - 1].objective) /
                                                  std::max(1.0, sweeps[k - 1].objective));
        // Sweeps 2..K-1 must not satisfy the stop rule; sweep K must, unless the cap was hit.
        const std::size_t last = sweeps.size() - 1;
        for (std::size_t k = 2; k < last; ++k)
            if (std::abs(sweeps[k - 1].objective - sweeps[k].objective) < config.epsilon) termination_ok = false;
        const bool stopped = last >= 2 && std::abs(sweeps[last - 1].objective - sweeps[last].objective) <
                                              config.epsilon;
        if (!(stopped || static_cast<int>(last) == config.max_sweeps)) termination_ok = false;
        if (stopped != prod.log.converged) termination_ok = false;
        total_sweeps += static_cast<int>(last);
    }
    return {worst_rise <= 1e-12 && termination_ok,
            fmt("max relative rise = %.3e, termination %s, mean sweeps = %.1f", worst_rise,
                termination_ok ? "ok" : "violated", total_sweeps / 20.0)};
}

Outcome budget_bound_check() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (std::size_t d : {50, 100}) {
        for (std::size_t g : {d, 2 * d, 4 * d}) {
            FactorizerConfig config;
            config.g = g;
            double sum = 0.0;
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                const DenseMatrix u = haar_orthogonal(d, 20000 + seed);
                const GivensProduct prod = factorize(u, DiagonalWeights::ones(d, d), config);
                sum += frobenius_distance_sq(u, dense_product_oracle(prod));
            }
            const double mean = sum / 100.0;
            const double bound = budget_bound(d, g);
            ok = ok && mean <= bound;
            detail += fmt("d=%zu g=%zu mean=%.2f bound=%.2f; ", d, g, mean, bound);
        }
    }
    const double secs = seconds_since(start);
    return {ok && secs < 300.0, detail + fmt("%.1fs of 300s", secs)};
}

Outcome extended_vs_rotations() {
    SyntheticConfig config;
    config.d = 50;
    config.g_grid = {100};
    config.trials = 100;
    config.seed = 30000;
    const SyntheticRow row = run_synthetic(config).front();
    return {row.extended_mean < row.rotations_mean && row.relative_improvement >= 0.05,
            fmt("extended %.5f vs rotations %.5f, relative improvement %.2f%%", row.extended_mean,
                row.rotations_mean, 100.0 * row.relative_improvement)};
}

Outcome expected_score() {
    constexpr std::size_t d = 1000;
    constexpr std::size_t pairs = 100000;
    constexpr std::uint64_t matrices = 2;
    Rng rng(606);
    double sum = 0.0;
    for (std::uint64_t m = 0; m < matrices; ++m) {
        DenseMatrix u = haar_orthogonal(d, 40000 + m);
        for (std::size_t c = 0; c < d; ++c)
            if (u(c, c) < 0.0)
                for (double& v : u.column(c)) v = -v;
        for (std::size_t k = 0; k < pairs / matrices; ++k) {
            const auto [i, j] = random_pair(d, rng);
            sum += score(block_of(u, i, j));
        }
    }
    const double mean = sum / pairs;
    const double target = 0.6956 / std::sqrt(static_cast<double>(d));
    const double rel = std::abs(mean / target - 1.0);
    return {rel <= 0.10, fmt("mean C = %.5f, target %.5f, relative deviation %.2f%%", mean, target, 100.0 * rel)};
}

Outcome error_geometry() {
    constexpr std::size_t d = 20;
    double circle = 0.0;
    double norm_max = 0.0;
    double bound_slack = 1e300;
    int applicable = 0;
    bool bound_ok = true;
    for (std::uint64_t n = 0; n < 100; ++n) {
        const DenseMatrix u = haar_orthogonal(d, 50000 + n);
        DenseMatrix u_bar;
        if (n % 2 == 0) {
            FactorizerConfig config;
            config.g = 20 + (n * 7) % 171;
            u_bar = dense_orthogonal(factorize(u, DiagonalWeights::ones(d, d), config));
        } else {
            u_bar = haar_orthogonal(d, 60000 + n);
        }
        for (const auto& z : error_spectrum(u, u_bar)) circle = std::max(circle, std::abs(std::abs(z - 1.0) - 1.0));
        DenseMatrix e = matmul_tn(u, u_bar);
        std::vector<double> cosines(d);
        for (std::size_t t = 0; t < d; ++t) {
            cosines[t] = e(t, t);
            for (std::size_t r = 0; r < d; ++r) e(r, t) = (r == t ? 1.0 : 0.0) - e(r, t);
        }
        const double op = singular_values(e).front();
        norm_max = std::max(norm_max, op);
        const OperatorNormBound bound = operator_norm_bound(cosines, d);
        if (bound.assumption_holds) {
            ++applicable;
            bound_ok = bound_ok && op <= bound.value + 1e-10;
            bound_slack = std::min(bound_slack, bound.value - op);
        }
    }
    return {circle <= 1e-8 && norm_max <= 2.0 + 1e-10 && bound_ok && applicable > 0,
            fmt("max ||z-1|-1| = %.3e, max ||E||_2 = %.6f, bound applied %d times, min slack %.3e", circle,
                norm_max, applicable, applicable > 0 ? bound_slack : 0.0)};
}

Outcome fast_apply_equivalence() {
    Rng rng(808);
    double worst = 0.0;
    bool flops_ok = true;
    int strictly_below = 0;
    for (int n = 0; n < 1000; ++n) {
        const std::size_t d = 4 + rng.below(29);
        const std::size_t p = n % 3 == 0 ? 1 : n % 3 == 1 ? std::max<std::size_t>(1, d / 4) : d;
        const std::size_t g = 1 + rng.below(3 * d);
        const GivensProduct prod = testing::random_product(d, p, g, rng);
        const std::vector<double> x = testing::gaussian_vector(d, rng);
        const ApplyPlan pl = plan(prod);
        ApplyStats stats;
        const std::vector<double> y = project(pl, prod, x, &stats);
        const DenseMatrix u = dense_product_oracle(prod);
        for (std::size_t t = 0; t < p; ++t) {
            double acc = 0.0;
            for (std::size_t r = 0; r < d; ++r) acc += u(r, t) * x[r];
            worst = std::max(worst, std::abs(y[t] - prod.weights.values[t] * acc));
        }
        const std::uint64_t cap = 6 * g + p;
        flops_ok = flops_ok && stats.flops <= cap && pl.flops_per_vector <= cap;
        if (pl.flops_per_vector < cap) ++strictly_below;
    }
    return {worst <= 1e-12 && flops_ok && strictly_below > 0,
            fmt("max |fast - dense| = %.3e, flops cap %s, %d of 1000 strictly below 6g+p", worst,
                flops_ok ? "held" : "violated", strictly_below)};
}

Outcome off_norm_inequality() {
    Rng rng(909);
    double worst = -1e300;
    int checked = 0;
    for (std::uint64_t n = 0; checked < 10000; ++n) {
        const std::size_t d = 3 + n % 10;
        const DenseMatrix u = haar_orthogonal(d, 70000 + n);
        const auto [i, j] = random_pair(d, rng);
        const Block2 b = block_of(u, i, j);
        if (b.det() < 0.0) continue;
        const DenseMatrix ug = matmul(u, transpose(to_dense(optimal_transform(b, i, j).transform, d)));
        double lhs = 0.0, off_u = 0.0;
        for (std::size_t c = 0; c < d; ++c)
            for (std::size_t r = 0; r < d; ++r)
                if (r != c) {
                    lhs += ug(r, c) * ug(r, c);
                    off_u += u(r, c) * u(r, c);
                }
        const double rhs = off_u + 0.5 * (std::pow(b.z11 - b.z22, 2) - std::pow(b.z12 - b.z21, 2));
        worst = std::max(worst, lhs - rhs);
        ++checked;
    }
    return {worst <= 1e-10, fmt("max(lhs - rhs) = %.3e over %d instances", worst, checked)};
}

Outcome pca_pipeline() {
    Dataset data = load_dataset_csv(fs::path(FASTORTHO_DATA_DIR) / "two_blobs.csv", LabelColumn::Last);
    split(data, 0.25, 1);
    ExperimentConfig config;
    config.p = 4;
    const std::size_t sat = saturation_budget(data.dimension(), config.p);
    config.g_grid = {16, 32, 64, sat};
    config.timing_repeats = 1;
    const ExperimentReport report = run_experiment(data, config);
    const ExperimentRow& at_sat = report.rows.back();
    double best_speedup = 0.0;
    std::size_t best_g = 0;
    for (const auto& row : report.rows)
        if (row.flops_speedup > best_speedup) {
            best_speedup = row.flops_speedup;
            best_g = row.g;
        }
    const double gap = std::abs(at_sat.accuracy_fast - at_sat.accuracy_full);
    return {data.dimension() == 64 && data.size() == 2000 && gap <= 0.01 && best_speedup > 1.0,
            fmt("g=%zu: full %.4f, fast %.4f; flops speedup %.2f at g=%zu (%.2f at saturation)", at_sat.g,
                at_sat.accuracy_full, at_sat.accuracy_fast, best_speedup, best_g, at_sat.flops_speedup)};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome reproducibility() {
    const fs::path dir = fs::temp_directory_path() / "fastortho_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto at = [&](const char* name) { return (dir / name).string(); };
    const std::vector<std::pair<std::vector<std::string>, std::string>> commands = {
        {{"sample-haar", "--d", "24", "--seed", "5", "--out", at("u.dmat")}, at("u.dmat")},
        {{"sample-haar", "--d", "8", "--seed", "5", "--out", at("u.csv")}, at("u.csv")},
        {{"factorize", "--in", at("u.dmat"), "--g", "40", "--sigma-rule", "update", "--out", at("u.egt"), "--json",
          at("u.json")},
         at("u.egt")},
        {{"factorize", "--in", at("u.dmat"), "--g", "40", "--sigma-rule", "update", "--out", at("u.egt"), "--json",
          at("u.json")},
         at("u.json")},
        {{"eval", "--u", at("u.dmat"), "--egt", at("u.egt"), "--out", at("eval.json")}, at("eval.json")},
        {{"stages", "--egt", at("u.egt"), "--out", at("stages.json")}, at("stages.json")},
        {{"bench", "--egt", at("u.egt"), "--seed", "3", "--no-timing", "--out", at("bench.json")}, at("bench.json")},
        {{"synthetic", "--d", "12", "--g-grid", "6,12", "--trials", "4", "--seed", "8", "--per-trial", "--out",
          at("syn.json")},
         at("syn.json")},
        {{"synthetic", "--d", "12", "--g-grid", "6,12", "--trials", "4", "--seed", "8", "--format", "csv", "--out",
          at("syn.csv")},
         at("syn.csv")},
        {{"make-fixture", "--kind", "digits", "--seed", "4", "--out", at("digits.csv")}, at("digits.csv")},
        {{"pca", "--data", at("digits.csv"), "--p", "4", "--g-grid", "0,20", "--sigma-rules", "identity,update",
          "--seed", "6", "--no-timing", "--out", at("pca.json")},
         at("pca.json")},
    };
    int identical = 0;
    std::string failed;
    for (const auto& [args, output] : commands) {
        std::string bytes[2], printed[2];
        for (int rep = 0; rep < 2; ++rep) {
            std::ostringstream out, err;
            if (cli::run_cli(args, out, err) != 0) failed += args.front() + "(exit) ";
            bytes[rep] = slurp(output);
            printed[rep] = out.str();
        }
        if (bytes[0] == bytes[1] && printed[0] == printed[1] && !bytes[0].empty())
            ++identical;
        else
            failed += args.front() + " ";
    }

    // EGT1 round trip: read, rewrite and compare bytes and values.
    const std::string original = slurp(at("u.egt"));
    const GivensProduct loaded = load_egt(at("u.egt"));
    std::ostringstream rewritten;
    write_egt(rewritten, loaded);
    std::istringstream back(rewritten.str());
    const GivensProduct reread = read_egt(back);
    const bool egt_ok = rewritten.str() == original && reread.transforms == loaded.transforms &&
                        reread.weights == loaded.weights && reread.d == loaded.d && reread.p == loaded.p;
    fs::remove_all(dir);
    const bool ok = identical == static_cast<int>(commands.size()) && egt_ok;
    return {ok, fmt("%d of %zu command outputs byte-identical%s; EGT1 round trip %s", identical, commands.size(),
                    failed.empty() ? "" : (" (differs: " + failed + ")").c_str(), egt_ok ? "bit-exact" : "differs")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"local optimality against 3600-angle grid", local_optimality},
        {"trace and score identity", trace_identity},
        {"monotone objective and stop rule", monotone_objective},
        {"mean error within budget bound", budget_bound_check},
        {"extended transforms beat rotations only", extended_vs_rotations},
        {"expected score constant at d=1000", expected_score},
        {"error matrix geometry", error_geometry},
        {"fast apply equals dense projection", fast_apply_equivalence},
        {"off-norm inequality", off_norm_inequality},
        {"PCA pipeline on two-blob fixture", pca_pipeline},
        {"reproducibility and EGT1 round trip", reproducibility},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[k].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs = seconds_since(start);
        if (!outcome.pass) ++failures;
        std::printf("%s [%zu] %s (%s) [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    outcome.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
