#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace fastortho {

/// Upper-triangular table of pair scores C_ij (i < j) with a cached maximum per
/// row, so the global argmax costs O(d) and single-entry updates are cheap.
/// Ties resolve to the lexicographically smallest (i, j).
class ScoreTable {
public:
    ScoreTable() = default;
    explicit ScoreTable(std::size_t d);

    std::size_t dimension() const noexcept { return d_; }
    std::size_t size() const noexcept { return scores_.size(); }

    double get(std::size_t i, std::size_t j) const noexcept { return scores_[index(i, j)]; }
    /// Sets C_ij and repairs the cached row maximum.
    void set(std::size_t i, std::size_t j, double value);
    /// Writes without repairing; call `rebuild_row` afterwards.
    void set_raw(std::size_t i, std::size_t j, double value) noexcept { scores_[index(i, j)] = value; }
    void rebuild_row(std::size_t i);
    void rebuild();

    std::pair<std::size_t, std::size_t> argmax() const;
    double max_score() const;

    double row_max(std::size_t i) const noexcept { return row_max_[i]; }
    std::size_t row_argmax(std::size_t i) const noexcept { return row_arg_[i]; }

private:
    std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return i * (2 * d_ - i - 1) / 2 + (j - i - 1);
    }

    std::size_t d_ = 0;
    std::vector<double> scores_;
    std::vector<double> row_max_;
    std::vector<std::size_t> row_arg_;
};

} // namespace fastortho
