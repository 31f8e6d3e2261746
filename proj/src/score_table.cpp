#include "fastortho/score_table.hpp"

#include <limits>

#include "fastortho/error.hpp"

namespace fastortho {

namespace {
constexpr double kNone = -std::numeric_limits<double>::infinity();
}

ScoreTable::ScoreTable(std::size_t d)
    : d_(d), scores_(d < 2 ? 0 : d * (d - 1) / 2, 0.0), row_max_(d, kNone), row_arg_(d, d) {
    rebuild();
}

void ScoreTable::set(std::size_t i, std::size_t j, double value) {
    scores_[index(i, j)] = value;
    if (row_arg_[i] == j) {
        if (value >= row_max_[i])
            row_max_[i] = value;
        else
            rebuild_row(i);
    } else if (value > row_max_[i] || (value == row_max_[i] && j < row_arg_[i])) {
        row_max_[i] = value;
        row_arg_[i] = j;
    }
}

void ScoreTable::rebuild_row(std::size_t i) {
    double best = kNone;
    std::size_t arg = d_;
    for (std::size_t j = i + 1; j < d_; ++j) {
        const double v = scores_[index(i, j)];
        if (v > best) {
            best = v;
            arg = j;
        }
    }
    row_max_[i] = best;
    row_arg_[i] = arg;
}

void ScoreTable::rebuild() {
    for (std::size_t i = 0; i < d_; ++i) rebuild_row(i);
}

std::pair<std::size_t, std::size_t> ScoreTable::argmax() const {
    if (d_ < 2) throw ShapeError("score table needs d >= 2");
    std::size_t best_row = 0;
    for (std::size_t i = 1; i + 1 < d_; ++i) {
        if (row_max_[i] > row_max_[best_row]) best_row = i;
    }
    return {best_row, row_arg_[best_row]};
}

double ScoreTable::max_score() const {
    auto [i, j] = argmax();
    return get(i, j);
}

} // namespace fastortho
