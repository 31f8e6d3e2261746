#include "fastortho/fast_apply.hpp"

#include <algorithm>

#include "fastortho/error.hpp"
#include "fastortho/parallel.hpp"

namespace fastortho {

std::size_t ApplyPlan::full_count() const { return std::count(ops.begin(), ops.end(), ApplyOp::Full); }

std::size_t ApplyPlan::half_count() const {
    return std::count(ops.begin(), ops.end(), ApplyOp::HalfRowI) +
           std::count(ops.begin(), ops.end(), ApplyOp::HalfRowJ);
}

std::size_t ApplyPlan::skip_count() const { return std::count(ops.begin(), ops.end(), ApplyOp::Skip); }

double ApplyPlan::selection_fraction() const {
    if (d == 0) return 0.0;
    return static_cast<double>(std::count(live_mask.begin(), live_mask.end(), true)) / static_cast<double>(d);
}

ApplyPlan plan(const GivensProduct& product) {
    validate(product);
    ApplyPlan out;
    out.d = product.d;
    out.p = product.p;
    out.ops.resize(product.g());

    std::vector<bool> live(product.d, false);
    std::fill_n(live.begin(), product.p, true);
    for (std::size_t k = product.g(); k-- > 0;) {
        const auto& t = product.transforms[k];
        const bool li = live[t.i];
        const bool lj = live[t.j];
        if (li && lj) {
            out.ops[k] = ApplyOp::Full;
        } else if (li) {
            out.ops[k] = ApplyOp::HalfRowI;
            live[t.j] = true;
        } else if (lj) {
            out.ops[k] = ApplyOp::HalfRowJ;
            live[t.i] = true;
        } else {
            out.ops[k] = ApplyOp::Skip;
        }
    }
    out.live_mask = std::move(live);
    out.flops_per_vector = 6ull * out.full_count() + 3ull * out.half_count() + product.p;
    out.stages = stage_partition(product);
    return out;
}

std::vector<std::vector<std::size_t>> stage_partition(const GivensProduct& product) {
    std::vector<std::vector<std::size_t>> stages;
    // last_stage[x] = 1 + id of the last stage touching index x (0 = never).
    std::vector<std::size_t> last_stage(product.d, 0);
    for (std::size_t k = 0; k < product.g(); ++k) {
        const auto& t = product.transforms[k];
        if (t.i >= product.d || t.j >= product.d) throw ShapeError("stage_partition: index out of range");
        const std::size_t current = stages.size();
        if (stages.empty() || last_stage[t.i] == current || last_stage[t.j] == current) stages.emplace_back();
        stages.back().push_back(k);
        last_stage[t.i] = last_stage[t.j] = stages.size();
    }
    return stages;
}

std::size_t count_stages(const GivensProduct& product) { return stage_partition(product).size(); }

std::vector<double> project(const ApplyPlan& plan, const GivensProduct& product, std::span<const double> x,
                            ApplyStats* stats) {
    if (x.size() != product.d) throw ShapeError("project: input length does not match d");
    if (plan.ops.size() != product.g() || plan.d != product.d || plan.p != product.p)
        throw ShapeError("project: plan was built for a different product");

    std::vector<double> w(x.begin(), x.end());
    std::size_t full = 0;
    std::size_t half = 0;
    for (std::size_t k = 0; k < product.g(); ++k) {
        const ApplyOp op = plan.ops[k];
        if (op == ApplyOp::Skip) continue;
        const auto& t = product.transforms[k];
        // Rows of the transposed block.
        const double a11 = t.g11();
        const double a12 = t.g21();
        const double a21 = t.g12();
        const double a22 = t.g22();
        const double xi = w[t.i];
        const double xj = w[t.j];
        switch (op) {
        case ApplyOp::Full:
            w[t.i] = a11 * xi + a12 * xj;
            w[t.j] = a21 * xi + a22 * xj;
            ++full;
            break;
        case ApplyOp::HalfRowI:
            w[t.i] = a11 * xi + a12 * xj;
            ++half;
            break;
        case ApplyOp::HalfRowJ:
            w[t.j] = a21 * xi + a22 * xj;
            ++half;
            break;
        case ApplyOp::Skip: break;
        }
    }
    std::vector<double> y(product.p);
    for (std::size_t t = 0; t < product.p; ++t) y[t] = product.weights.values[t] * w[t];
    if (stats) {
        stats->full += full;
        stats->half += half;
        stats->flops += 6ull * full + 3ull * half + product.p;
    }
    return y;
}

std::vector<double> project_unpruned(const GivensProduct& product, std::span<const double> x) {
    if (x.size() != product.d) throw ShapeError("project_unpruned: input length does not match d");
    DenseMatrix w(product.d, 1, std::vector<double>(x.begin(), x.end()));
    for (const auto& t : product.transforms) apply_left(t, w, true);
    std::vector<double> y(product.p);
    for (std::size_t t = 0; t < product.p; ++t) y[t] = product.weights.values[t] * w(t, 0);
    return y;
}

std::vector<double> reconstruct(const GivensProduct& product, std::span<const double> y) {
    if (y.size() != product.p) throw ShapeError("reconstruct: input length does not match p");
    DenseMatrix z(product.d, 1);
    for (std::size_t t = 0; t < product.p; ++t) z(t, 0) = product.weights.values[t] * y[t];
    for (auto it = product.transforms.rbegin(); it != product.transforms.rend(); ++it) apply_left(*it, z, false);
    auto col = z.column(0);
    return {col.begin(), col.end()};
}

DenseMatrix project_batch(const ApplyPlan& plan, const GivensProduct& product, const DenseMatrix& x,
                          unsigned threads) {
    if (x.rows() != product.d) throw ShapeError("project_batch: rows do not match d");
    DenseMatrix out(product.p, x.cols());
    parallel_for(x.cols(), threads, [&](std::size_t c) {
        const auto y = project(plan, product, x.column(c));
        std::copy(y.begin(), y.end(), out.column(c).begin());
    });
    return out;
}

} // namespace fastortho
