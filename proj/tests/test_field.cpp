#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rdlwe/field.hpp"
#include "rdlwe/rng.hpp"

using namespace rdlwe;

namespace {

// Brute-force floor-mod by repeated subtraction/addition.
i64 slow_mod(i64 a, i64 q) {
    while (a < 0) a += q;
    while (a >= q) a -= q;
    return a;
}

} // namespace

TEST_CASE("modulus construction validates primality and range") {
    CHECK_NOTHROW(Modulus{3});
    CHECK_NOTHROW(Modulus{97});
    CHECK_NOTHROW(Modulus{281474976710677ull}); // prime just above 2^48
    CHECK_THROWS_AS(Modulus{4}, Error);
    CHECK_THROWS_AS(Modulus{1}, Error);
    CHECK_THROWS_AS(Modulus{2}, Error); // below supported range
    CHECK_THROWS_AS(Modulus{(u64{1} << 62) + 1}, Error);
}

TEST_CASE("floor-mod reduction") {
    Modulus q{97};
    CHECK(q.reduce(-1) == 96);
    CHECK(q.reduce(97) == 0);
    CHECK(q.reduce(0) == 0);
    // cross-check against repeated subtraction
    CHECK(q.reduce(1000000) == static_cast<u64>(slow_mod(1000000, 97)));
    RngStream rng(7);
    for (int i = 0; i < 200; ++i) {
        i64 a = static_cast<i64>(rng.next_u64() % 2000001) - 1000000;
        CHECK(q.reduce(a) == static_cast<u64>(slow_mod(a, 97)));
    }
}

TEST_CASE("multiplicative inverse") {
    Modulus q7{7};
    CHECK(q7.inv(3) == 5);
    CHECK(q7.inv(1) == 1);
    CHECK_THROWS_AS(Modulus{97}.inv(0), ZeroInverse);
    Modulus q{97};
    for (u64 a = 1; a < 97; ++a) CHECK(q.mul(a, q.inv(a)) == 1); // exhaustive over Z_97
}

TEST_CASE("centered lift") {
    Modulus q{97};
    CHECK(q.centered(96) == -1);
    CHECK(q.centered(48) == 48);
    // floor((2*49 + 97) / (2*97)) = floor(195/194) = 1, so 49 - 97
    CHECK(q.centered(49) == -48);
    CHECK(q.centered(0) == 0);
    for (u64 a = 0; a < 97; ++a) {
        i64 lifted = q.centered(a);
        CHECK(lifted >= -48);
        CHECK(lifted <= 48);
        CHECK(q.reduce(lifted) == a); // round trip
    }
}

TEST_CASE("reduction is a ring homomorphism on samples") {
    Modulus q{97};
    RngStream rng(11);
    for (int i = 0; i < 300; ++i) {
        i64 x = static_cast<i64>(rng.next_u64() % 200001) - 100000;
        i64 y = static_cast<i64>(rng.next_u64() % 200001) - 100000;
        CHECK(q.reduce(x + y) == q.add(q.reduce(x), q.reduce(y)));
        CHECK(q.reduce(static_cast<i128>(x) * y) == q.mul(q.reduce(x), q.reduce(y)));
    }
}

TEST_CASE("large modulus arithmetic stays exact") {
    Modulus q{2305843009213693951ull}; // 2^61 - 1
    u64 a = q.value() - 2, b = q.value() - 3;
    // (q-2)(q-3) = q^2 -5q + 6 ≡ 6 mod q
    CHECK(q.mul(a, b) == 6);
    CHECK(q.add(a, b) == q.value() - 5);
    CHECK(q.mul(a, q.inv(a)) == 1);
}

TEST_CASE("next_prime and primality") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(97));
    CHECK(!is_prime_u64(91));
    CHECK(next_prime(u64{1} << 48) == 281474976710677ull);
    CHECK(is_prime_u64(next_prime(u64{1} << 40)));
}

TEST_CASE("rng determinism and uniform rejection range") {
    RngStream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream r(1);
    for (int i = 0; i < 1000; ++i) CHECK(r.uniform_below(97) < 97);
}
