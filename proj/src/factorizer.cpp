#include "fastortho/factorizer.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "fastortho/error.hpp"
#include "fastortho/givens.hpp"

namespace fastortho {

namespace {

double pair_score(const Block2& b, bool rotations_only) {
    return rotations_only ? rotation_score(b) : score(b);
}

// Z = L N^T.
DenseMatrix outer_product(const DenseMatrix& l, const DenseMatrix& n) {
    const std::size_t d = l.rows();
    DenseMatrix z(d, n.rows());
    for (std::size_t col = 0; col < n.rows(); ++col) {
        auto zc = z.column(col);
        for (std::size_t t = 0; t < l.cols(); ++t) {
            const double w = n(col, t);
            if (w == 0.0) continue;
            auto lt = l.column(t);
            for (std::size_t r = 0; r < d; ++r) zc[r] += lt[r] * w;
        }
    }
    return z;
}

void refresh_index(GreedyState& s, std::size_t k) {
    const std::size_t d = s.z.rows();
    for (std::size_t r = 0; r < k; ++r) s.table.set(r, k, pair_score(block_of(s.z, r, k), s.rotations_only));
    for (std::size_t c = k + 1; c < d; ++c)
        s.table.set_raw(k, c, pair_score(block_of(s.z, k, c), s.rotations_only));
    s.table.rebuild_row(k);
}

void refresh_pair(GreedyState& s, std::size_t i, std::size_t j) {
    refresh_index(s, i);
    refresh_index(s, j);
}

double max_abs_gram_residual(const DenseMatrix& u) {
    DenseMatrix g = matmul_tn(u, u);
    double worst = 0.0;
    for (std::size_t c = 0; c < g.cols(); ++c)
        for (std::size_t r = 0; r < g.rows(); ++r)
            worst = std::max(worst, std::abs(g(r, c) - (r == c ? 1.0 : 0.0)));
    return worst;
}

} // namespace

ScoreTable initialize_scores(const DenseMatrix& l, const DenseMatrix& n, bool rotations_only) {
    if (l.rows() != n.rows() || l.cols() != n.cols()) throw ShapeError("initialize_scores: L and N differ in shape");
    const std::size_t d = l.rows();
    const std::size_t p = l.cols();
    auto zdot = [&](std::size_t a, std::size_t b) {
        double acc = 0.0;
        for (std::size_t t = 0; t < p; ++t) acc += l(a, t) * n(b, t);
        return acc;
    };
    ScoreTable table(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double zii = zdot(i, i);
        for (std::size_t j = i + 1; j < d; ++j) {
            const Block2 b{zii, zdot(i, j), zdot(j, i), zdot(j, j)};
            table.set_raw(i, j, pair_score(b, rotations_only));
        }
    }
    table.rebuild();
    return table;
}

ScoreTable scores_from(const DenseMatrix& z, bool rotations_only) {
    if (z.rows() != z.cols()) throw ShapeError("scores_from: Z must be square");
    const std::size_t d = z.rows();
    ScoreTable table(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) table.set_raw(i, j, pair_score(block_of(z, i, j), rotations_only));
    table.rebuild();
    return table;
}

GreedyState::GreedyState(DenseMatrix l_in, DenseMatrix n_in, bool rotations_only_in)
    : l(std::move(l_in)), n(std::move(n_in)), rotations_only(rotations_only_in) {
    if (l.rows() != n.rows() || l.cols() != n.cols()) throw ShapeError("GreedyState: L and N differ in shape");
    if (l.rows() < 2) throw ShapeError("GreedyState: need d >= 2");
    z = outer_product(l, n);
    table = scores_from(z, rotations_only);
    l_norm_sq = frobenius_norm_sq(l);
}

double GreedyState::objective() const {
    return l_norm_sq + frobenius_norm_sq(n) - 2.0 * trace(z);
}

ExtendedGivens greedy_step(GreedyState& state, std::span<ExtendedGivens> slots, std::size_t slot) {
    if (slot >= slots.size()) throw ShapeError("greedy_step: slot out of range");
    const std::size_t d = state.z.rows();

    const ExtendedGivens old = slots[slot];
    validate(old, d);
    if (!old.is_identity()) {
        apply_left(old, state.n, true);
        apply_right(old, state.z, false); // Z = L (G^T N)^T = Z G
        refresh_pair(state, old.i, old.j);
    }

    const auto [i, j] = state.table.argmax();
    ExtendedGivens chosen = ExtendedGivens::identity(i, j);
    if (state.table.get(i, j) > 0.0) {
        const Block2 b = block_of(state.z, i, j);
        chosen = (state.rotations_only ? optimal_rotation(b, i, j) : optimal_transform(b, i, j)).transform;
    }
    if (!chosen.is_identity()) {
        apply_left(chosen, state.l, true);
        apply_left(chosen, state.z, true); // Z = (G^T L) N^T = G^T Z
        refresh_pair(state, i, j);
    }
    slots[slot] = chosen;
    return chosen;
}

DiagonalWeights update_sigma(const DenseMatrix& l_final, SigmaRule rule, const DiagonalWeights& sigma_in) {
    switch (rule) {
    case SigmaRule::Identity: return DiagonalWeights::ones(sigma_in.d, sigma_in.p());
    case SigmaRule::Original: return sigma_in;
    case SigmaRule::Update: {
        if (l_final.cols() != sigma_in.p() || l_final.rows() < l_final.cols())
            throw ShapeError("update_sigma: L shape does not match weights");
        DiagonalWeights out{sigma_in.d, std::vector<double>(sigma_in.p())};
        for (std::size_t t = 0; t < out.p(); ++t) out.values[t] = l_final(t, t);
        return out;
    }
    }
    throw ValidationError("update_sigma: unknown rule");
}

GivensProduct factorize(const DenseMatrix& u_p, const DiagonalWeights& sigma, const FactorizerConfig& config) {
    config.validate();
    const std::size_t d = u_p.rows();
    const std::size_t p = u_p.cols();
    if (p > d) throw ShapeError("factorize: p = " + std::to_string(p) + " exceeds d = " + std::to_string(d));
    if (d < 2) throw ValidationError("factorize: need d >= 2");
    if (sigma.p() != p || sigma.d != d) throw ShapeError("factorize: weights do not match U_p");
    for (double v : sigma.values)
        if (!(v > 0.0)) throw ValidationError("factorize: weights must be positive");
    require_finite(u_p, "factorize");
    const double residual = max_abs_gram_residual(u_p);
    if (!(residual <= 1e-8)) {
        throw ValidationError("factorize: columns of U_p are not orthonormal (max |U^T U - I| = " +
                                  std::to_string(residual) + ")",
                              residual);
    }

    const auto start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };

    GivensProduct out;
    out.d = d;
    out.p = p;
    out.sigma_rule = config.sigma_rule;
    out.transforms.assign(config.g, ExtendedGivens::identity(0, 1));
    out.weights = config.sigma_rule == SigmaRule::Identity ? DiagonalWeights::ones(d, p) : sigma;
    out.log.config = config;

    const DenseMatrix l0 = scale_columns(u_p, sigma.values);
    double previous = frobenius_distance_sq(l0, out.weights.dense());
    out.log.sweeps.push_back({0, previous, elapsed_ms()});
    if (config.record_steps) out.log.step_objectives.push_back(previous);

    for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
        GivensProduct view{d, p, out.transforms, out.weights, out.sigma_rule, {}};
        GreedyState state(l0, dense_operator(view), config.rotations_only);
        if (sweep == 1 && config.score_init == ScoreInit::Literal) {
            state.table = initialize_scores(u_p, out.weights.dense(), config.rotations_only);
        }

        for (std::size_t k = 0; k < config.g; ++k) {
            greedy_step(state, out.transforms, k);
            if (config.record_steps) out.log.step_objectives.push_back(state.objective());
        }

        out.weights = update_sigma(state.l, config.sigma_rule, out.weights);
        const double current = frobenius_distance_sq(state.l, out.weights.dense());
        if (config.record_steps && config.sigma_rule == SigmaRule::Update)
            out.log.step_objectives.push_back(current);
        out.log.sweeps.push_back({sweep, current, elapsed_ms()});

        const bool settled = sweep > 1 && std::abs(previous - current) < config.epsilon;
        previous = current;
        if (settled) {
            out.log.converged = true;
            break;
        }
    }
    return out;
}

} // namespace fastortho
