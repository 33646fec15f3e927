#include "rdlwe/field.hpp"

namespace rdlwe {

namespace {

u64 pow_mod(u64 a, u64 e, u64 n) {
    u64 r = 1;
    a %= n;
    while (e > 0) {
        if (e & 1) r = static_cast<u64>(static_cast<u128>(r) * a % n);
        a = static_cast<u64>(static_cast<u128>(a) * a % n);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These witnesses decide primality for all n < 3.3e24.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = static_cast<u64>(static_cast<u128>(x) * x % n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u64 next_prime(u64 n) {
    if (n <= 2) return 2;
    if ((n & 1) == 0) ++n;
    while (!is_prime_u64(n)) n += 2;
    return n;
}

Modulus::Modulus(u64 q) : q_(q) {
    if (q < 3 || q > kMaxModulus) throw Error("modulus must satisfy 3 <= q < 2^62");
    if (!is_prime_u64(q)) throw Error("modulus must be prime");
}

u64 Modulus::pow(u64 a, u64 e) const { return pow_mod(a, e, q_); }

} // namespace rdlwe
