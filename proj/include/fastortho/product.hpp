#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fastortho/givens.hpp"
#include "fastortho/matrix.hpp"

namespace fastortho {

/// How the diagonal weights of the factored operator are chosen.
enum class SigmaRule : std::uint8_t {
    Identity = 0, ///< flatten the spectrum
    Original = 1, ///< keep the input weights
    Update = 2,   ///< re-estimate from diag(U_bar^T U_p Sigma_p) after each sweep
};

std::string_view to_string(SigmaRule rule);
std::optional<SigmaRule> parse_sigma_rule(std::string_view text);

/// Which Z seeds the score table of the very first sweep.
enum class ScoreInit : std::uint8_t {
    Consistent, ///< Z = L N^T = (U_p Sigma_p) Sigma_bar^T
    Literal,    ///< Z = U_p Sigma_bar^T, as written in the algorithm's init line
};

struct FactorizerConfig {
    std::size_t g = 1;
    SigmaRule sigma_rule = SigmaRule::Identity;
    double epsilon = 1e-2;
    int max_sweeps = 100;
    bool rotations_only = false;
    std::uint64_t seed = 0;
    ScoreInit score_init = ScoreInit::Consistent;
    /// Keep the objective after every greedy step (and every weight update).
    bool record_steps = false;

    void validate() const;
};

struct SweepRecord {
    int sweep = 0; ///< 0 is the all-identity initialisation
    double objective = 0.0;
    double elapsed_ms = 0.0;
};

struct BuildLog {
    FactorizerConfig config;
    std::vector<SweepRecord> sweeps;
    std::vector<double> step_objectives;
    bool converged = false; ///< stopped by the epsilon criterion rather than max_sweeps
};

/// U_bar * Sigma_bar with U_bar = transforms[0] * transforms[1] * ... * transforms[g-1].
/// Applying U_bar to a vector runs transforms[g-1] first.
struct GivensProduct {
    std::size_t d = 0;
    std::size_t p = 0;
    std::vector<ExtendedGivens> transforms;
    DiagonalWeights weights;
    SigmaRule sigma_rule = SigmaRule::Identity;
    BuildLog log;

    std::size_t g() const noexcept { return transforms.size(); }
};

/// Checks dimensions, transform invariants and weight count.
void validate(const GivensProduct& product);

/// Explicit d x d orthogonal factor U_bar.
DenseMatrix dense_orthogonal(const GivensProduct& product);
/// Explicit d x p operator U_bar * Sigma_bar.
DenseMatrix dense_operator(const GivensProduct& product);

/// Bit-level equality of the serialisable parts (ignores the build log).
bool same_operator(const GivensProduct& a, const GivensProduct& b);

} // namespace fastortho
