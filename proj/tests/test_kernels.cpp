#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "rdlwe/field.hpp"
#include "rdlwe/kernels.hpp"
#include "rdlwe/rng.hpp"

using namespace rdlwe;
namespace k = rdlwe::kernels;

namespace {

std::vector<u64> random_row(RngStream& rng, std::size_t n, u64 q) {
    std::vector<u64> v(n);
    for (auto& x : v) x = rng.uniform_below(q);
    return v;
}

// Equivalence of a SIMD variant against the scalar reference on random
// rows, across moduli sizes and awkward lengths (tails shorter than a
// vector register).
void check_equivalence(const k::Ops& variant) {
    const u64 moduli[] = {3, 11, 97, 65537, 281474976710677ull, 2305843009213693951ull,
                          (u64{1} << 62) - 57}; // largest supported prime region
    RngStream rng(2024);
    for (u64 q : moduli) {
        REQUIRE(is_prime_u64(q));
        for (std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{7},
                              std::size_t{64}, std::size_t{1026}}) {
            auto dst0 = random_row(rng, n, q);
            auto src = random_row(rng, n, q);
            // exercise boundary values too
            if (n >= 3) {
                dst0[0] = q - 1;
                src[0] = q - 1;
                dst0[1] = 0;
                src[2] = 1;
            }
            for (u64 mult : {u64{0}, u64{1}, q - 1, rng.uniform_below(q)}) {
                auto a = dst0, b = dst0, c = dst0, d = dst0, e = dst0, f = dst0;
                k::scalar_ops().add_rows(a.data(), src.data(), n, q);
                variant.add_rows(b.data(), src.data(), n, q);
                CHECK(a == b);
                k::scalar_ops().sub_rows(c.data(), src.data(), n, q);
                variant.sub_rows(d.data(), src.data(), n, q);
                CHECK(c == d);
                k::scalar_ops().axpy_rows(e.data(), mult, src.data(), n, q);
                variant.axpy_rows(f.data(), mult, src.data(), n, q);
                CHECK(e == f);
            }
        }
    }
}

} // namespace

TEST_CASE("scalar kernels match direct 128-bit arithmetic") {
    Modulus q{281474976710677ull};
    RngStream rng(5);
    const std::size_t n = 257;
    auto dst = random_row(rng, n, q.value());
    auto src = random_row(rng, n, q.value());
    u64 mult = rng.uniform(q);
    auto expect = dst;
    for (std::size_t i = 0; i < n; ++i)
        expect[i] = q.add(expect[i], q.mul(mult, src[i]));
    k::scalar_ops().axpy_rows(dst.data(), mult, src.data(), n, q.value());
    CHECK(dst == expect);
}

TEST_CASE("avx2 kernels are equivalent to the scalar reference") {
    const k::Ops* avx2 = k::avx2_ops();
    if (avx2 == nullptr) {
        MESSAGE("AVX2 not available on this host; variant not exercised");
        return;
    }
    check_equivalence(*avx2);
}

TEST_CASE("active dispatch returns a working kernel set") {
    const k::Ops& ops = k::active();
    std::vector<u64> dst{1, 2, 3}, src{96, 95, 94};
    ops.add_rows(dst.data(), src.data(), 3, 97);
    CHECK(dst == std::vector<u64>{0, 0, 0});
}

TEST_CASE("force hook pins the variant") {
    k::force(&k::scalar_ops());
    CHECK(std::string(k::active().name) == "scalar");
    k::force(nullptr);
}
