#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rdlwe/checks.hpp"
#include "rdlwe/zero_dynamics.hpp"

using namespace rdlwe;

namespace {

// Test-local simulator, independent of the library's stepping code.
std::vector<u64> naive_outputs(const SystemZq& sys, ZqMatrix x, const std::vector<u64>& ys) {
    const Modulus& q = sys.mod();
    const std::size_t n = sys.dim();
    std::vector<u64> out;
    for (u64 y : ys) {
        u64 r = q.mul(sys.J, y);
        for (std::size_t c = 0; c < n; ++c) r = q.add(r, q.mul(sys.H.at(0, c), x.at(c, 0)));
        out.push_back(r);
        ZqMatrix next(n, 1, q);
        for (std::size_t i = 0; i < n; ++i) {
            u64 acc = q.mul(sys.G.at(i, 0), y);
            for (std::size_t c = 0; c < n; ++c)
                acc = q.add(acc, q.mul(sys.F.at(i, c), x.at(c, 0)));
            next.at(i, 0) = acc;
        }
        x = std::move(next);
    }
    return out;
}

ZqMatrix random_vec(RngStream& rng, std::size_t n, Modulus q) {
    ZqMatrix v(n, 1, q);
    for (auto& x : v.data()) x = rng.uniform(q);
    return v;
}

} // namespace

TEST_CASE("relative degree") {
    Modulus q{97};
    // double-chain: H G = 0, H F G = 1
    SystemZq chain(ZqMatrix::from_signed(2, 2, q, {0, 1, 0, 0}),
                   ZqMatrix::from_signed(2, 1, q, {0, 1}), ZqMatrix::from_signed(1, 2, q, {1, 0}),
                   0);
    CHECK(relative_degree(chain) == 2);

    SystemZq feedthrough(ZqMatrix::from_signed(2, 2, q, {0, 1, 0, 0}),
                         ZqMatrix::from_signed(2, 1, q, {0, 1}),
                         ZqMatrix::from_signed(1, 2, q, {1, 0}), 5);
    CHECK(relative_degree(feedthrough) == 0);

    // output decoupled from input: no relative degree
    SystemZq dead(ZqMatrix::from_signed(2, 2, q, {1, 0, 0, 1}),
                  ZqMatrix::from_signed(2, 1, q, {0, 1}), ZqMatrix::from_signed(1, 2, q, {1, 0}),
                  0);
    CHECK_THROWS_AS(relative_degree(dead), NoRelativeDegree);
    CHECK_THROWS_AS(build_transform(dead), NoRelativeDegree);

    // brute-force scan oracle on random systems
    Modulus q11{11};
    RngStream rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        SystemZq sys = random_system(rng, 3, q11);
        std::size_t expected = 0;
        if (sys.J == 0) {
            ZqMatrix row = sys.H;
            expected = SIZE_MAX;
            for (std::size_t d = 1; d <= 3; ++d) {
                if (!matmul(row, sys.G).is_zero()) {
                    expected = d;
                    break;
                }
                row = matmul(row, sys.F);
            }
        }
        CHECK(relative_degree(sys) == expected);
    }
}

TEST_CASE("transform on a worked example") {
    Modulus q{97};
    SystemZq sys(ZqMatrix::from_signed(2, 2, q, {1, 1, 0, 1}),
                 ZqMatrix::from_signed(2, 1, q, {0, 1}), ZqMatrix::from_signed(1, 2, q, {0, 1}),
                 0);
    NormalForm nf = build_transform(sys);
    CHECK(nf.nu == 1);
    CHECK(nf.to_chain == ZqMatrix::from_signed(1, 2, q, {0, 1}));
    CHECK(nf.to_zd == ZqMatrix::from_signed(1, 2, q, {1, 0}));
    CHECK(nf.zd_update == ZqMatrix::from_signed(1, 1, q, {1}));
    CHECK(nf.zd_drive == ZqMatrix::from_signed(1, 1, q, {1}));
    CHECK(nf.head_from_zd.is_zero());
    CHECK(nf.head_from_chain == ZqMatrix::from_signed(1, 1, q, {1}));
    CHECK(nf.input_gain == 1);
}

TEST_CASE("full relative degree leaves no internal block") {
    Modulus q{97};
    SystemZq sys(ZqMatrix::from_signed(2, 2, q, {0, 1, 0, 0}),
                 ZqMatrix::from_signed(2, 1, q, {0, 1}), ZqMatrix::from_signed(1, 2, q, {1, 0}),
                 0);
    NormalForm nf = build_transform(sys);
    CHECK(nf.nu == 2);
    CHECK(nf.to_zd.rows() == 0);
    CHECK(nf.zd_update.rows() == 0);
    // zero-output premise forces x0 = 0 here, and the input is identically 0
    ZqMatrix x0(2, 1, q);
    CHECK(zero_output_input(nf, x0, 5) == 0);
}

TEST_CASE("feedthrough branch substitutes the closed-loop generator") {
    Modulus q{7};
    SystemZq sys(ZqMatrix::from_signed(2, 2, q, {1, 2, 3, 4}),
                 ZqMatrix::from_signed(2, 1, q, {1, 1}), ZqMatrix::from_signed(1, 2, q, {2, 0}),
                 3);
    NormalForm nf = build_transform(sys);
    CHECK(nf.nu == 0);
    CHECK(nf.to_zd == ZqMatrix::identity(2, q));
    CHECK(nf.input_gain == 3);
    // F - G * 5 * H mod 7, with 5 = 3^{-1}
    ZqMatrix expect = sys.F - matmul(sys.G.scaled(q.inv(3)), sys.H);
    CHECK(nf.zd_update == expect);
}

TEST_CASE("normal form step tracks the system") {
    Modulus q{11};
    RngStream rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        SystemZq sys = random_system_with_nu(rng, 3, 1 + rng.uniform_below(3), q);
        NormalForm nf = build_transform(sys);
        ZqMatrix x = random_vec(rng, 3, q);
        ZqMatrix z = matmul(nf.to_zd, x);
        ZqMatrix v = matmul(nf.to_chain, x);
        std::vector<u64> ys;
        for (int s = 0; s < 20; ++s) ys.push_back(rng.uniform(q));
        std::vector<u64> expected = naive_outputs(sys, x, ys);
        for (int s = 0; s < 20; ++s) {
            auto step = normal_form_step(nf, z, v, ys[s]);
            CHECK(step.output == expected[s]);
            z = step.z_next;
            v = step.v_next;
        }
        // zero state and input stay at rest
        ZqMatrix z0(nf.dim() - nf.nu, 1, q), v0(nf.nu, 1, q);
        auto rest = normal_form_step(nf, z0, v0, 0);
        CHECK(rest.output == 0);
        CHECK(rest.z_next.is_zero());
        CHECK(rest.v_next.is_zero());
    }
}

TEST_CASE("zero-output inputs pin the residue to zero") {
    Modulus q{97};
    // worked example: internal state a feeds the input forever
    SystemZq sys(ZqMatrix::from_signed(2, 2, q, {1, 1, 0, 1}),
                 ZqMatrix::from_signed(2, 1, q, {0, 1}), ZqMatrix::from_signed(1, 2, q, {0, 1}),
                 0);
    NormalForm nf = build_transform(sys);
    ZqMatrix x0 = ZqMatrix::from_signed(2, 1, q, {5, 0}); // chain part zero
    std::vector<u64> ys;
    for (u64 t = 0; t < 50; ++t) ys.push_back(zero_output_input(nf, x0, t));
    for (u64 r : naive_outputs(sys, x0, ys)) CHECK(r == 0);

    ZqMatrix zero(2, 1, q);
    for (u64 t = 0; t < 5; ++t) CHECK(zero_output_input(nf, zero, t) == 0);

    ZqMatrix bad = ZqMatrix::from_signed(2, 1, q, {1, 2});
    CHECK_THROWS_AS(zero_output_input(nf, bad, 0), NonzeroInitialOutput);
}

TEST_CASE("equivalent information preserves the output") {
    Modulus q{11};
    RngStream rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(3);
        SystemZq sys = random_system(rng, n, q);
        NormalForm nf = build_transform(sys);
        ZqMatrix x0 = random_vec(rng, n, q);
        std::vector<u64> ys;
        for (int s = 0; s < 30; ++s) ys.push_back(rng.uniform(q));

        EquivalentInfo eq = equivalent_info(nf, x0, ys);
        std::vector<u64> a = naive_outputs(sys, x0, ys);
        std::vector<u64> b = naive_outputs(sys, matmul(nf.from_chain, eq.v0), eq.shifted_inputs);
        CHECK(a == b);

        // zero initial state: nothing shifts
        ZqMatrix zero(n, 1, q);
        EquivalentInfo id = equivalent_info(nf, zero, ys);
        CHECK(id.v0.is_zero());
        CHECK(id.shifted_inputs == ys);
    }
}

TEST_CASE("equivalent input recovery from outputs") {
    Modulus q{11};
    RngStream rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(3);
        SystemZq sys = random_system(rng, n, q);
        NormalForm nf = build_transform(sys);
        ZqMatrix x0 = random_vec(rng, n, q);
        std::vector<u64> ys;
        for (int s = 0; s < 25; ++s) ys.push_back(rng.uniform(q));

        std::vector<u64> record = output_record(sys, x0, ys);
        CHECK(record.size() == ys.size() + nf.nu);
        EquivalentInfo direct = equivalent_info(nf, x0, ys);
        EquivalentInfo recovered = residue_to_equivalent_input(nf, record, ys.size());
        CHECK(recovered.v0 == direct.v0);
        CHECK(recovered.shifted_inputs == direct.shifted_inputs);
    }

    // all-zero record recovers the zero information
    SystemZq sys = random_system_with_nu(rng, 3, 2, q);
    NormalForm nf = build_transform(sys);
    std::vector<u64> zeros(12, 0);
    EquivalentInfo eq = residue_to_equivalent_input(nf, zeros);
    CHECK(eq.v0.is_zero());
    for (u64 y : eq.shifted_inputs) CHECK(y == 0);

    // insufficient history is rejected
    CHECK_THROWS_AS(residue_to_equivalent_input(nf, zeros, 11), InsufficientHistory);
    CHECK_THROWS_AS(residue_to_equivalent_input(nf, std::vector<u64>{0}, std::nullopt),
                    InsufficientHistory);
}

TEST_CASE("feedthrough recovery matches the generator on the first step") {
    Modulus q{11};
    RngStream rng(19);
    SystemZq sys = random_system_with_nu(rng, 2, 0, q);
    NormalForm nf = build_transform(sys);
    ZqMatrix x0 = random_vec(rng, 2, q);
    std::vector<u64> ys;
    for (int s = 0; s < 10; ++s) ys.push_back(rng.uniform(q));
    std::vector<u64> record = output_record(sys, x0, ys);
    EquivalentInfo eq = residue_to_equivalent_input(nf, record);
    // with no accumulated history the first input is gain^{-1} * r(0)
    CHECK(eq.shifted_inputs[0] == q.mul(q.inv(nf.input_gain), record[0]));
    CHECK(eq.shifted_inputs == equivalent_info(nf, x0, ys).shifted_inputs);
}

TEST_CASE("output record extension is input-independent") {
    Modulus q{11};
    RngStream rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        SystemZq sys = random_system_with_nu(rng, 3, 1 + rng.uniform_below(3), q);
        ZqMatrix x0 = random_vec(rng, 3, q);
        std::vector<u64> ys;
        for (int s = 0; s < 10; ++s) ys.push_back(rng.uniform(q));
        std::vector<u64> record = output_record(sys, x0, ys);
        // simulating with any continuation gives the same extended outputs
        std::vector<u64> longer = ys;
        for (std::size_t i = 0; i < relative_degree(sys); ++i) longer.push_back(rng.uniform(q));
        std::vector<u64> full = naive_outputs(sys, x0, longer);
        CHECK(record == full);
    }
}
