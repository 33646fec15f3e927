#pragma once

#include <cstdint>

#include "rdlwe/errors.hpp"

namespace rdlwe {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Prime modulus q together with the arithmetic of the field Z_q.
///
/// Elements are kept as canonical residues in [0, q).  The constructor
/// verifies primality with a deterministic Miller-Rabin test and enforces
/// 3 <= q < 2^62, so that any product of two residues fits a 128-bit
/// integer and sums of two residues stay below 2^63 (the SIMD kernels
/// rely on both bounds).
class Modulus {
public:
    static constexpr u64 kMaxModulus = (u64{1} << 62) - 1;

    explicit Modulus(u64 q);

    u64 value() const { return q_; }

    /// Floor-modulo of a signed integer: a - floor(a/q)*q, in [0, q).
    u64 reduce(i128 a) const {
        i128 q = static_cast<i128>(q_);
        i128 r = a % q;
        if (r < 0) r += q;
        return static_cast<u64>(r);
    }

    u64 reduce_u128(u128 a) const { return static_cast<u64>(a % q_); }

    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        if (s >= q_) s -= q_;
        return s;
    }

    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + q_ - b; }

    u64 neg(u64 a) const { return a == 0 ? 0 : q_ - a; }

    u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % q_); }

    u64 pow(u64 a, u64 e) const;

    /// Multiplicative inverse via Fermat (q prime).  Throws ZeroInverse on 0.
    u64 inv(u64 a) const {
        if (a == 0) throw ZeroInverse{};
        return pow(a, q_ - 2);
    }

    /// Signed representative a - floor((2a+q)/(2q))*q in [-(q-1)/2, (q-1)/2].
    i64 centered(u64 a) const {
        return 2 * a >= q_ ? static_cast<i64>(a) - static_cast<i64>(q_) : static_cast<i64>(a);
    }

    bool operator==(const Modulus& other) const { return q_ == other.q_; }
    bool operator!=(const Modulus& other) const { return q_ != other.q_; }

private:
    u64 q_;
};

/// Deterministic primality test for n < 2^63 (Miller-Rabin with the
/// 12-base witness set, exact in this range).
bool is_prime_u64(u64 n);

/// Smallest prime >= n (n < 2^62).  Used by parameter sizing.
u64 next_prime(u64 n);

} // namespace rdlwe
