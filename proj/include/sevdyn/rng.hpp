#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace sevdyn {

/// Deterministic standard-normal source: mt19937_64 + Box-Muller (v1, fixed).
///
/// The draw sequence is fully determined by the seed. std::mt19937_64 is
/// specified bit-exactly by the standard, and the Box-Muller transform below
/// is spelled out explicitly rather than relying on std::normal_distribution,
/// whose algorithm is implementation-defined. One normal per next() call;
/// each call consumes exactly two 64-bit generator words.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double next() {
        // u1 in (0,1] so that log(u1) is finite; u2 in [0,1).
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace sevdyn
