#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>

namespace lgg {

struct RngSpec {
    std::string algorithm = "mt19937_64";
    std::uint64_t seed = 0;
};

/// Seedable generator with platform-independent variates.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniforms take the top 53 bits of each draw; normals use the
/// Marsaglia polar method, returning the cached second variate on alternate
/// calls; bounded integers use rejection on the smallest covering mask. None
/// of the std:: distributions are involved, so a recorded seed replays the
/// same stream with any standard library.
class Rng {
public:
    explicit Rng(const RngSpec& spec);

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform();
    /// Standard normal.
    double normal();
    /// Uniform integer on [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent seed from a base seed and a sequence of keys.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

inline RngSpec derive_spec(const RngSpec& base, std::initializer_list<std::uint64_t> keys) {
    return RngSpec{base.algorithm, derive_seed(base.seed, keys)};
}

}  // namespace lgg
