#pragma once

#include <cstdint>
#include <random>

#include "rdlwe/field.hpp"

namespace rdlwe {

/// Deterministic random stream.  Backed by std::mt19937_64, whose output
/// sequence is fixed by the standard, so transcripts reproduce bit-exactly
/// across platforms for a given seed.  Single-owner: no concurrent draws.
class RngStream {
public:
    explicit RngStream(u64 seed) : gen_(seed) {}

    u64 next_u64() { return gen_(); }

    /// Unbiased uniform draw from [0, q) by rejection from the native range.
    u64 uniform_below(u64 q) {
        // 2^64 mod q; draws at or above 2^64 - rem are rejected.
        u64 rem = static_cast<u64>((static_cast<u128>(1) << 64) % q);
        u64 limit = u64(0) - rem; // 2^64 - rem mod 2^64
        for (;;) {
            u64 v = gen_();
            if (rem == 0 || v < limit) return v % q;
        }
    }

    u64 uniform(const Modulus& q) { return uniform_below(q.value()); }

    /// 63 uniform bits, used by the inverse-CDF noise sampler.
    u64 next_bits63() { return gen_() >> 1; }

private:
    std::mt19937_64 gen_;
};

} // namespace rdlwe
