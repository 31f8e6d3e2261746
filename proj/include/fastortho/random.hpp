#pragma once

#include <array>
#include <cstdint>

namespace fastortho {

/// xoshiro256** seeded through splitmix64, with Box-Muller normals.
/// Output is identical on every platform for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    double normal();

private:
    std::array<std::uint64_t, 4> s_{};
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

} // namespace fastortho
