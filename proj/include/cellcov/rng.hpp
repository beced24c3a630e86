#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cellcov {

// Philox4x32-10 counter-based generator. Every random quantity in the
// simulator is addressed by (seed, stream, counter), so results are
// bit-reproducible regardless of evaluation order or worker count.
struct PhiloxBlock {
    std::uint32_t v[4];
};

inline PhiloxBlock philox4x32(std::uint32_t k0, std::uint32_t k1,
                              std::uint32_t c0, std::uint32_t c1,
                              std::uint32_t c2, std::uint32_t c3) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c2;
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
        k0 += W0;
        k1 += W1;
    }
    return PhiloxBlock{{c0, c1, c2, c3}};
}

namespace rng_detail {

inline double u64_to_unit(std::uint64_t x) {
    // [0,1) with 53-bit resolution
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline double u64_to_open_unit(std::uint64_t x) {
    // (0,1), half-ulp dither keeps log() finite on both ends
    return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

} // namespace rng_detail

// Sequential stream of draws for one (seed, stream) pair. Streams with
// distinct ids are independent; the high bit of the stream word is reserved
// for keyed random access (see below).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : k0_(static_cast<std::uint32_t>(seed)),
          k1_(static_cast<std::uint32_t>(seed >> 32)),
          s0_(static_cast<std::uint32_t>(stream)),
          s1_(static_cast<std::uint32_t>(stream >> 32) & 0x7FFFFFFFu) {}

    std::uint64_t next_u64() {
        if (have_ == 0) {
            buf_ = philox4x32(k0_, k1_,
                              static_cast<std::uint32_t>(counter_),
                              static_cast<std::uint32_t>(counter_ >> 32),
                              s0_, s1_);
            ++counter_;
            have_ = 2;
        }
        --have_;
        const int base = 2 * have_;
        return (static_cast<std::uint64_t>(buf_.v[base]) << 32) | buf_.v[base + 1];
    }

    double uniform() { return rng_detail::u64_to_unit(next_u64()); }

    // Unit-mean exponential, strictly positive.
    double exponential() { return -std::log(rng_detail::u64_to_open_unit(next_u64())); }

    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        const double r = std::sqrt(-2.0 * std::log(rng_detail::u64_to_open_unit(next_u64())));
        const double t = 2.0 * std::numbers::pi * rng_detail::u64_to_unit(next_u64());
        cached_normal_ = r * std::sin(t);
        have_normal_ = true;
        return r * std::cos(t);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Unbiased integer in [0,n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold)
                return x % n;
        }
    }

private:
    std::uint32_t k0_, k1_, s0_, s1_;
    std::uint64_t counter_ = 0;
    PhiloxBlock buf_{};
    int have_ = 0;
    bool have_normal_ = false;
    double cached_normal_ = 0.0;
};

// Keyed random access: one value fully determined by (seed, tag, i, j, lane).
// Uses the reserved high bit so it can never collide with CounterRng streams.
inline PhiloxBlock keyed_block(std::uint64_t seed, std::uint32_t tag,
                               std::uint32_t i, std::uint32_t j, std::uint32_t lane = 0) {
    return philox4x32(static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      i, j, lane, 0x80000000u | tag);
}

inline double normal_at(std::uint64_t seed, std::uint32_t tag,
                        std::uint32_t i, std::uint32_t j, std::uint32_t lane = 0) {
    const PhiloxBlock b = keyed_block(seed, tag, i, j, lane);
    const std::uint64_t x = (static_cast<std::uint64_t>(b.v[0]) << 32) | b.v[1];
    const std::uint64_t y = (static_cast<std::uint64_t>(b.v[2]) << 32) | b.v[3];
    const double r = std::sqrt(-2.0 * std::log(rng_detail::u64_to_open_unit(x)));
    return r * std::cos(2.0 * std::numbers::pi * rng_detail::u64_to_unit(y));
}

inline double exponential_at(std::uint64_t seed, std::uint32_t tag,
                             std::uint32_t i, std::uint32_t j, std::uint32_t lane = 0) {
    const PhiloxBlock b = keyed_block(seed, tag, i, j, lane);
    const std::uint64_t x = (static_cast<std::uint64_t>(b.v[0]) << 32) | b.v[1];
    return -std::log(rng_detail::u64_to_open_unit(x));
}

} // namespace cellcov
