#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "rdlwe/matrix.hpp"
#include "rdlwe/rng.hpp"

using namespace rdlwe;

namespace {

ZqMatrix random_matrix(RngStream& rng, std::size_t r, std::size_t c, Modulus mod) {
    ZqMatrix m(r, c, mod);
    for (auto& v : m.data()) v = rng.uniform(mod);
    return m;
}

ZqMatrix random_invertible(RngStream& rng, std::size_t n, Modulus mod) {
    for (;;) {
        ZqMatrix m = random_matrix(rng, n, n, mod);
        if (mat_rank(m) == n) return m;
    }
}

// Schoolbook product in unreduced integer arithmetic, reduced at the end.
ZqMatrix schoolbook(const ZqMatrix& a, const ZqMatrix& b) {
    ZqMatrix c(a.rows(), b.cols(), a.mod());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            u128 acc = 0;
            for (std::size_t l = 0; l < a.cols(); ++l)
                acc += static_cast<u128>(a.at(i, l)) * b.at(l, j);
            c.at(i, j) = static_cast<u64>(acc % a.mod().value());
        }
    return c;
}

} // namespace

TEST_CASE("matmul basics and oracle") {
    Modulus q{11};
    RngStream rng(3);
    ZqMatrix m = random_matrix(rng, 3, 3, q);
    CHECK(matmul(ZqMatrix::identity(3, q), m) == m);
    ZqMatrix zero(3, 3, q);
    CHECK(matmul(m, zero).is_zero());
    for (int trial = 0; trial < 20; ++trial) {
        ZqMatrix a = random_matrix(rng, 4, 4, q);
        ZqMatrix b = random_matrix(rng, 4, 4, q);
        CHECK(matmul(a, b) == schoolbook(a, b));
    }
}

TEST_CASE("matmul rejects mismatched shapes and moduli") {
    Modulus q{11}, p{97};
    ZqMatrix a(2, 3, q), b(2, 3, q), c(3, 2, p);
    CHECK_THROWS_AS(matmul(a, b), DimensionMismatch);
    CHECK_THROWS_AS(matmul(a, c), ModulusMismatch);
}

TEST_CASE("zero-sized dimensions behave like empty sums") {
    Modulus q{11};
    ZqMatrix a(2, 0, q), b(0, 3, q);
    ZqMatrix c = matmul(a, b);
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 3);
    CHECK(c.is_zero());
}

TEST_CASE("matrix inverse") {
    Modulus q7{7};
    ZqMatrix d = ZqMatrix::from_signed(2, 2, q7, {2, 0, 0, 3});
    ZqMatrix dinv = mat_inverse(d);
    CHECK(dinv == ZqMatrix::from_signed(2, 2, q7, {4, 0, 0, 5}));

    Modulus q{97};
    CHECK(mat_inverse(ZqMatrix::identity(4, q)) == ZqMatrix::identity(4, q));

    RngStream rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        ZqMatrix m = random_invertible(rng, 5, q);
        ZqMatrix inv = mat_inverse(m);
        CHECK(matmul(m, inv) == ZqMatrix::identity(5, q));
        CHECK(matmul(inv, m) == ZqMatrix::identity(5, q));
        CHECK(mat_inverse(inv) == m); // involution
    }

    ZqMatrix sing = ZqMatrix::from_signed(2, 2, q, {1, 2, 2, 4});
    CHECK_THROWS_AS(mat_inverse(sing), Singular);
}

TEST_CASE("mat_pow") {
    Modulus q{97};
    RngStream rng(17);
    ZqMatrix m = random_matrix(rng, 3, 3, q);
    CHECK(mat_pow(m, 0) == ZqMatrix::identity(3, q));
    ZqMatrix nil = ZqMatrix::from_signed(2, 2, q, {0, 1, 0, 0});
    CHECK(mat_pow(nil, 2).is_zero());
    ZqMatrix acc = ZqMatrix::identity(3, q);
    for (int i = 0; i < 7; ++i) acc = matmul(acc, m); // repeated-multiplication oracle
    CHECK(mat_pow(m, 7) == acc);
}

TEST_CASE("left kernel basis") {
    Modulus q{97};
    ZqMatrix g = ZqMatrix::from_signed(2, 1, q, {0, 1});
    auto basis = left_kernel_basis(g);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == ZqMatrix::from_signed(1, 2, q, {1, 0}));

    ZqMatrix zero(2, 1, q);
    CHECK(left_kernel_basis(zero).size() == 2);

    Modulus q11{11};
    RngStream rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        ZqMatrix rg = random_matrix(rng, 3, 1, q11);
        if (rg.is_zero()) continue;
        auto b = left_kernel_basis(rg);
        REQUIRE(b.size() == 2);
        for (const auto& row : b) CHECK(matmul(row, rg).is_zero());
        CHECK(mat_rank(vstack(b, 3, q11)) == 2); // pairwise independent (rank oracle)
    }
}

TEST_CASE("extend_to_basis") {
    Modulus q{11};
    RngStream rng(29);
    ZqMatrix g = random_matrix(rng, 3, 1, q);
    while (g.is_zero()) g = random_matrix(rng, 3, 1, q);
    auto kernel = left_kernel_basis(g);

    // empty partial returns the whole basis
    auto full = extend_to_basis({}, kernel);
    CHECK(full.size() == kernel.size());
    CHECK(mat_rank(vstack(full, 3, q)) == kernel.size());

    // full partial returns nothing
    CHECK(extend_to_basis(kernel, kernel).empty());

    // one row inside the span gets completed to rank n-1
    std::vector<ZqMatrix> partial{kernel[0]};
    auto added = extend_to_basis(partial, kernel);
    CHECK(added.size() == kernel.size() - 1);
    auto stacked = partial;
    stacked.insert(stacked.end(), added.begin(), added.end());
    CHECK(mat_rank(vstack(stacked, 3, q)) == kernel.size());

    // dependent partial rejected
    std::vector<ZqMatrix> dep{kernel[0], kernel[0]};
    CHECK_THROWS_AS(extend_to_basis(dep, kernel), DependentInput);

    // row outside the span rejected
    ZqMatrix outside(1, 3, q);
    outside.at(0, 0) = 1;
    if (!matmul(outside, g).is_zero())
        CHECK_THROWS_AS(extend_to_basis({outside}, kernel), DependentInput);
}

TEST_CASE("elimination is pivot-deterministic") {
    Modulus q{97};
    RngStream rng(31);
    ZqMatrix m = random_matrix(rng, 6, 6, q);
    CHECK(mat_rank(m) == mat_rank(m));
    if (mat_rank(m) == 6) CHECK(mat_inverse(m) == mat_inverse(m));
}

TEST_CASE("elementwise add/sub and scaling") {
    Modulus q{97};
    RngStream rng(37);
    ZqMatrix a = random_matrix(rng, 3, 5, q);
    ZqMatrix b = random_matrix(rng, 3, 5, q);
    ZqMatrix s = a;
    s += b;
    s -= b;
    CHECK(s == a);
    u64 k = rng.uniform(q);
    ZqMatrix scaled = a.scaled(k);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(scaled.at(i, j) == q.mul(k, a.at(i, j)));
}
