#include "lgg/rng.hpp"

#include <bit>
#include <cmath>

#include "lgg/errors.hpp"

namespace lgg {

Rng::Rng(const RngSpec& spec) : engine_(spec.seed) {
    if (spec.algorithm != "mt19937_64") {
        throw DomainError("unsupported rng algorithm: " + spec.algorithm);
    }
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * factor;
    has_cached_ = true;
    return u * factor;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw DomainError("Rng::below requires a positive bound");
    }
    if (bound == 1) {
        return 0;
    }
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
    std::uint64_t draw = 0;
    do {
        draw = engine_() & mask;
    } while (draw >= bound);
    return draw;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = mix64(base);
    for (const auto key : keys) {
        h = mix64(h ^ mix64(key + 0x632be59bd9b4e019ULL));
    }
    return h;
}

}  // namespace lgg
