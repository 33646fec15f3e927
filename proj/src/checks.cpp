#include "rdlwe/checks.hpp"

#include <chrono>
#include <sstream>

#include "rdlwe/errors.hpp"

namespace rdlwe {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

ZqMatrix random_matrix(RngStream& rng, std::size_t r, std::size_t c, Modulus q) {
    ZqMatrix m(r, c, q);
    for (auto& v : m.data()) v = rng.uniform(q);
    return m;
}

ZqMatrix random_invertible(RngStream& rng, std::size_t n, Modulus q) {
    for (;;) {
        ZqMatrix m = random_matrix(rng, n, n, q);
        if (mat_rank(m) == n) return m;
    }
}

std::vector<u64> random_inputs(RngStream& rng, std::size_t count, Modulus q) {
    std::vector<u64> ys(count);
    for (auto& y : ys) y = rng.uniform(q);
    return ys;
}

// Encrypted iteration of the system on modified ciphertexts; returns the
// disclosed first elements of the residue rows.
std::vector<u64> encrypted_residues(const SystemZq& sys, const Ciphertext& init,
                                    const std::vector<Ciphertext>& inputs) {
    const Modulus& q = sys.mod();
    std::vector<u64> disclosed;
    disclosed.reserve(inputs.size());
    Ciphertext state = init;
    for (const Ciphertext& meas : inputs) {
        Ciphertext res = hom_matmul(sys.H, state);
        res.body() += meas.body().scaled(sys.J);
        disclosed.push_back(res.body().at(0, 0));
        Ciphertext next = hom_matmul(sys.F, state);
        next += hom_matmul(sys.G, meas);
        state = std::move(next);
        (void)q;
    }
    return disclosed;
}

struct Failure {
    std::string detail;
};

template <typename Body>
CheckResult run_check(const std::string& name, std::size_t trials, Body&& body) {
    const auto start = Clock::now();
    if (trials == 0)
        return CheckResult{name, true, "vacuous pass: 0 trials requested", seconds_since(start)};
    try {
        body();
    } catch (const Failure& f) {
        return CheckResult{name, false, f.detail, seconds_since(start)};
    } catch (const std::exception& e) {
        return CheckResult{name, false, std::string("exception: ") + e.what(),
                           seconds_since(start)};
    }
    return CheckResult{name, true, std::to_string(trials) + " trials exact",
                       seconds_since(start)};
}

[[noreturn]] void fail(const std::string& detail) { throw Failure{detail}; }

void expect(bool cond, const std::string& detail) {
    if (!cond) fail(detail);
}

} // namespace

SystemZq random_system_with_nu(RngStream& rng, std::size_t n, std::size_t nu, Modulus q) {
    if (nu > n) throw Error("relative degree cannot exceed the order");
    if (nu == 0) {
        ZqMatrix f = random_matrix(rng, n, n, q);
        ZqMatrix g = random_matrix(rng, n, 1, q);
        ZqMatrix h = random_matrix(rng, 1, n, q);
        u64 j = 1 + rng.uniform_below(q.value() - 1);
        return SystemZq(std::move(f), std::move(g), std::move(h), j);
    }
    const std::size_t nz = n - nu;
    // Chain coordinates: internal block, shift chain, dense bottom row.
    ZqMatrix f(n, n, q);
    for (std::size_t i = 0; i < nz; ++i)
        for (std::size_t c = 0; c < n; ++c) f.at(i, c) = rng.uniform(q);
    for (std::size_t i = 0; i + 1 < nu; ++i) f.at(nz + i, nz + i + 1) = 1;
    for (std::size_t c = 0; c < n; ++c) f.at(n - 1, c) = rng.uniform(q);
    ZqMatrix g(n, 1, q);
    g.at(n - 1, 0) = 1 + rng.uniform_below(q.value() - 1);
    ZqMatrix h(1, n, q);
    h.at(0, nz) = 1;
    // Hide the structure behind a random change of basis.
    ZqMatrix basis = random_invertible(rng, n, q);
    ZqMatrix basis_inv = mat_inverse(basis);
    return SystemZq(matmul(matmul(basis, f), basis_inv), matmul(basis, g),
                    matmul(h, basis_inv), 0);
}

SystemZq random_system(RngStream& rng, std::size_t n, Modulus q) {
    const std::size_t nu = rng.uniform_below(n + 1);
    return random_system_with_nu(rng, n, nu, q);
}

CheckResult check_lwe_correctness(u64 seed, std::size_t trials) {
    return run_check("lwe-correctness", trials, [&] {
        Modulus q{97};
        RngStream rng(seed);
        SecretKey sk = keygen(4, q, 0.0, rng);
        SecretKey sk1 = keygen(4, q, 1.0, rng);
        GaussianSampler noise(1.0);
        for (std::size_t i = 0; i < trials; ++i) {
            const std::size_t n = 1 + rng.uniform_below(4);
            ZqMatrix v = random_matrix(rng, n, 1, q);
            // sigma = 0: exact recovery
            expect(decrypt(encrypt(v, sk, rng), sk) == v, "sigma=0 decryption differs");
            // sigma = 1: the recorded error is recovered exactly
            LweRandomness rand = sample_lwe_randomness(n, sk1, noise, rng);
            ZqMatrix dec = decrypt(encrypt_with(v, sk1, rand), sk1);
            for (std::size_t r = 0; r < n; ++r)
                expect(dec.at(r, 0) == q.add(v.at(r, 0), q.reduce(rand.e[r])),
                       "sigma=1 decryption is not message plus recorded error");
        }
    });
}

CheckResult check_homomorphism(u64 seed, std::size_t trials) {
    return run_check("homomorphism", trials, [&] {
        Modulus q{97};
        RngStream rng(seed + 1);
        SecretKey sk = keygen(4, q, 1.0, rng);
        GaussianSampler noise(1.0);
        for (std::size_t i = 0; i < trials; ++i) {
            const std::size_t n = 1 + rng.uniform_below(4);
            const std::size_t m = 1 + rng.uniform_below(4);
            ZqMatrix v = random_matrix(rng, n, 1, q);
            LweRandomness rand = sample_lwe_randomness(n, sk, noise, rng);
            Ciphertext c = encrypt_with(v, sk, rand);
            ZqMatrix noisy = v;
            for (std::size_t r = 0; r < n; ++r)
                noisy.at(r, 0) = q.add(noisy.at(r, 0), q.reduce(rand.e[r]));
            ZqMatrix k = random_matrix(rng, m, n, q);
            expect(decrypt(hom_matmul(k, c), sk) == matmul(k, noisy),
                   "single multiplication does not commute with decryption");
            ZqMatrix k2 = random_matrix(rng, 2, m, q);
            expect(decrypt(hom_matmul(k2, hom_matmul(k, c)), sk) ==
                       matmul(k2, matmul(k, noisy)),
                   "chained multiplication does not commute with decryption");
        }
    });
}

CheckResult check_normal_form(u64 seed, std::size_t trials) {
    return run_check("normal-form", trials, [&] {
        RngStream rng(seed + 2);
        const u64 qs[] = {11, 97};
        for (std::size_t i = 0; i < trials; ++i) {
            Modulus q{qs[i % 2]};
            const std::size_t n = 1 + rng.uniform_below(4);
            SystemZq sys = random_system(rng, n, q);
            NormalForm nf = build_transform(sys);

            // Stacked transform and its inverse multiply to identity both ways.
            ZqMatrix t(n, n, q);
            for (std::size_t r = 0; r < n - nf.nu; ++r)
                for (std::size_t c = 0; c < n; ++c) t.at(r, c) = nf.to_zd.at(r, c);
            for (std::size_t r = 0; r < nf.nu; ++r)
                for (std::size_t c = 0; c < n; ++c) t.at(n - nf.nu + r, c) = nf.to_chain.at(r, c);
            ZqMatrix v(n, n, q);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < n - nf.nu; ++c) v.at(r, c) = nf.from_zd.at(r, c);
                for (std::size_t c = 0; c < nf.nu; ++c)
                    v.at(r, n - nf.nu + c) = nf.from_chain.at(r, c);
            }
            expect(matmul(t, v) == ZqMatrix::identity(n, q), "T V != I");
            expect(matmul(v, t) == ZqMatrix::identity(n, q), "V T != I");

            if (nf.nu >= 1) {
                ZqMatrix tg = matmul(t, sys.G);
                for (std::size_t r = 0; r + 1 < n; ++r)
                    expect(tg.at(r, 0) == 0, "T G has nonzero above the gain");
                expect(tg.at(n - 1, 0) == nf.input_gain && nf.input_gain != 0,
                       "T G gain mismatch");

                // Transformed trajectory tracks the direct simulation.
                ZqMatrix x = random_matrix(rng, n, 1, q);
                ZqMatrix z = matmul(nf.to_zd, x);
                ZqMatrix vc = matmul(nf.to_chain, x);
                for (int step = 0; step < 20; ++step) {
                    const u64 y = rng.uniform(q);
                    expect(matmul(nf.to_zd, x) == z && matmul(nf.to_chain, x) == vc,
                           "transformed state diverged from direct simulation");
                    const u64 r_direct = system_step(sys, x, y);
                    NormalFormStep nstep = normal_form_step(nf, z, vc, y);
                    expect(nstep.output == r_direct, "normal-form output differs");
                    z = std::move(nstep.z_next);
                    vc = std::move(nstep.v_next);
                }
            } else {
                expect(nf.input_gain == sys.J, "direct feedthrough must be the gain");
                ZqMatrix closed =
                    sys.F - matmul(sys.G.scaled(q.inv(sys.J)), sys.H);
                expect(nf.zd_update == closed, "equivalent-input generator mismatch");
            }
        }
    });
}

CheckResult check_zero_output(u64 seed, std::size_t trials) {
    return run_check("zero-output", trials, [&] {
        RngStream rng(seed + 3);
        const u64 qs[] = {11, 97};
        for (std::size_t i = 0; i < trials; ++i) {
            Modulus q{qs[i % 2]};
            const std::size_t n = 1 + rng.uniform_below(4);
            SystemZq sys = random_system(rng, n, q);
            NormalForm nf = build_transform(sys);

            // An initial state with vanishing chain part.
            ZqMatrix x0 = nf.nu == 0 ? random_matrix(rng, n, 1, q)
                                     : matmul(nf.from_zd, random_matrix(rng, n - nf.nu, 1, q));
            const std::size_t steps = 50;
            std::vector<u64> ys(steps);
            for (std::size_t t = 0; t < steps; ++t) ys[t] = zero_output_input(nf, x0, t);
            for (u64 r : simulate_outputs(sys, x0, ys))
                expect(r == 0, "zero-output input produced a nonzero residue");

            // A single-step input perturbation surfaces after exactly nu steps.
            const std::size_t tau = rng.uniform_below(steps - n - 1);
            const u64 delta = 1 + rng.uniform_below(q.value() - 1);
            std::vector<u64> forged = ys;
            forged[tau] = q.add(forged[tau], delta);
            std::vector<u64> out = simulate_outputs(sys, x0, forged);
            for (std::size_t t = 0; t < tau + nf.nu; ++t)
                expect(out[t] == 0, "perturbation visible too early");
            expect(out[tau + nf.nu] == q.mul(nf.input_gain, delta),
                   "perturbation did not surface as gain * delta");

            if (nf.nu >= 1) {
                ZqMatrix bad = random_matrix(rng, n, 1, q);
                ZqMatrix chain0 = matmul(nf.to_chain, bad);
                if (!chain0.is_zero()) {
                    try {
                        zero_output_input(nf, bad, 0);
                        fail("nonzero chain part accepted");
                    } catch (const NonzeroInitialOutput&) {
                    }
                    // Reverse direction: the first nu outputs read off the
                    // chain part, so the output cannot stay at zero.
                    std::vector<u64> head =
                        simulate_outputs(sys, bad, std::vector<u64>(nf.nu, 0));
                    for (std::size_t i = 0; i < nf.nu; ++i)
                        expect(head[i] == chain0.at(i, 0),
                               "early outputs do not read off the chain part");
                    bool nonzero = false;
                    for (u64 r : head) nonzero = nonzero || r != 0;
                    expect(nonzero, "nonzero chain part produced an all-zero output window");
                }
            }
        }
    });
}

CheckResult check_equivalence(u64 seed, std::size_t trials) {
    return run_check("equivalent-information", trials, [&] {
        RngStream rng(seed + 4);
        const u64 qs[] = {11, 97};
        const std::size_t steps = 30;
        for (std::size_t i = 0; i < trials; ++i) {
            Modulus q{qs[i % 2]};
            const std::size_t n = 1 + rng.uniform_below(4);
            SystemZq sys = random_system(rng, n, q);
            NormalForm nf = build_transform(sys);
            ZqMatrix x0 = random_matrix(rng, n, 1, q);
            std::vector<u64> ys = random_inputs(rng, steps, q);

            std::vector<u64> direct = simulate_outputs(sys, x0, ys);
            EquivalentInfo eq = equivalent_info(nf, x0, ys);
            ZqMatrix x0eq = matmul(nf.from_chain, eq.v0);
            std::vector<u64> shifted = simulate_outputs(sys, x0eq, eq.shifted_inputs);
            expect(direct == shifted, "equivalent information changed the output");

            // Uniqueness: any perturbation of the shifted inputs breaks
            // equality within the relative-degree window.
            const std::size_t tau = rng.uniform_below(steps - n - 1);
            const u64 delta = 1 + rng.uniform_below(q.value() - 1);
            std::vector<u64> forged = eq.shifted_inputs;
            forged[tau] = q.add(forged[tau], delta);
            std::vector<u64> out = simulate_outputs(sys, x0eq, forged);
            std::size_t first = steps;
            for (std::size_t t = 0; t < steps; ++t)
                if (out[t] != direct[t]) {
                    first = t;
                    break;
                }
            expect(first == tau + nf.nu, "input perturbation surfaced at the wrong step");

            if (nf.nu >= 1) {
                ZqMatrix v0 = eq.v0;
                const std::size_t idx = rng.uniform_below(nf.nu);
                v0.at(idx, 0) = q.add(v0.at(idx, 0), delta);
                std::vector<u64> out2 =
                    simulate_outputs(sys, matmul(nf.from_chain, v0), eq.shifted_inputs);
                bool differs = false;
                for (std::size_t t = 0; t <= idx && t < steps; ++t)
                    if (out2[t] != direct[t]) differs = true;
                expect(differs, "chain-part perturbation left the output unchanged");
            }
        }
    });
}

CheckResult check_disclosure(u64 seed, std::size_t trials) {
    return run_check("residue-disclosure", trials, [&] {
        RngStream rng(seed + 5);
        Modulus q{97};
        const std::size_t steps = 30;
        for (std::size_t i = 0; i < trials; ++i) {
            const double sigma = (i % 2 == 0) ? 0.0 : 1.0;
            const std::size_t n = 1 + rng.uniform_below(4);
            SystemZq sys = random_system(rng, n, q);
            RngStream krng(rng.next_u64());
            SecretKey sk = keygen(4, q, sigma, krng);
            EncryptorSession session(sk, sys, RngStream(rng.next_u64()));

            ZqMatrix x0 = random_matrix(rng, n, 1, q);
            std::vector<u64> ys = random_inputs(rng, steps, q);
            Ciphertext init = session.encrypt_initial_state(x0);
            std::vector<Ciphertext> meas;
            meas.reserve(steps);
            for (u64 y : ys) meas.push_back(session.encrypt_input(y));

            std::vector<u64> disclosed = encrypted_residues(sys, init, meas);
            std::vector<u64> plain = simulate_outputs(sys, x0, ys);
            // Oracle that tracks the masked messages directly.
            std::vector<u64> masked_in(steps);
            for (std::size_t t = 0; t < steps; ++t) masked_in[t] = meas[t].body().at(0, 0);
            std::vector<u64> masked = simulate_outputs(sys, init.masked_message(), masked_in);

            for (std::size_t t = 0; t < steps; ++t) {
                expect(disclosed[t] == masked[t],
                       "disclosed residue differs from the masked-message oracle");
                expect(disclosed[t] == plain[t],
                       "masking failed to cancel in the residue (sigma=" +
                           std::to_string(sigma) + ")");
            }
        }
    });
}

CheckResult check_modified_scheme(u64 seed, std::size_t trials) {
    return run_check("modified-scheme", trials, [&] {
        RngStream rng(seed + 6);
        Modulus q{97};
        for (std::size_t i = 0; i < trials; ++i) {
            const double sigma = (i % 2 == 0) ? 0.0 : 1.0;
            const std::size_t n = 1 + rng.uniform_below(4);
            SystemZq sys = random_system(rng, n, q);
            RngStream krng(rng.next_u64());
            SecretKey sk = keygen(4, q, sigma, krng);
            GaussianSampler noise(sigma);

            LweRandomness init_rand = sample_lwe_randomness(n, sk, noise, rng);
            LweRandomness init_copy{init_rand.a, init_rand.e};
            EncryptorSession session(sk, sys, RngStream(rng.next_u64()), std::move(init_copy));

            ZqMatrix x0 = random_matrix(rng, n, 1, q);
            Ciphertext c_mod = session.encrypt_initial_state(x0);
            Ciphertext c_conv = encrypt_with(x0, sk, init_rand);
            expect(decrypt_mod(c_mod, sk) == decrypt(c_conv, sk),
                   "modified and conventional decryption disagree on the state");

            // Matched randomness on a few inputs.
            for (int s = 0; s < 5; ++s) {
                const u64 y = rng.uniform(q);
                LweRandomness yr = sample_lwe_randomness(1, sk, noise, rng);
                ZqMatrix yv(1, 1, q);
                yv.at(0, 0) = y;
                Ciphertext my = session.encrypt_input_with(y, yr);
                Ciphertext cy = encrypt_with(yv, sk, yr);
                expect(decrypt_mod(my, sk) == decrypt(cy, sk),
                       "modified and conventional decryption disagree on an input");
            }

            // Multiplication commutes equally on both sides.
            ZqMatrix k = random_matrix(rng, 1 + rng.uniform_below(3), n, q);
            expect(decrypt_mod(hom_matmul(k, c_mod), sk) == decrypt(hom_matmul(k, c_conv), sk),
                   "multiplication does not preserve the decryption equality");
        }
    });
}

CheckResult check_transcript_bijection(u64 seed, std::size_t trials) {
    return run_check("transcript-bijection", trials, [&] {
        RngStream rng(seed + 7);
        Modulus q{97};
        const std::size_t steps = 30;
        for (std::size_t i = 0; i < trials; ++i) {
            const double sigma = (i % 2 == 0) ? 0.0 : 1.0;
            const std::size_t n = 1 + rng.uniform_below(4);
            SystemZq sys = random_system(rng, n, q);
            RngStream krng(rng.next_u64());
            SecretKey sk = keygen(4, q, sigma, krng);
            EncryptorSession session(sk, sys, RngStream(rng.next_u64()));

            ZqMatrix x0 = random_matrix(rng, n, 1, q);
            ModifiedTranscript mt{session.encrypt_initial_state(x0), {}};
            for (u64 y : random_inputs(rng, steps, q)) mt.inputs.push_back(session.encrypt_input(y));

            auto [conv, residues] = transcript_to_conventional(mt, sys);
            ModifiedTranscript back = transcript_to_modified(conv, residues, sys);
            expect(back.init == mt.init, "initial-state ciphertext not reproduced");
            for (std::size_t t = 0; t < steps; ++t)
                expect(back.inputs[t] == mt.inputs[t], "input ciphertext not reproduced");

            auto [conv2, residues2] = transcript_to_conventional(back, sys);
            expect(residues2 == residues, "residue record not reproduced");
            expect(conv2.init == conv.init, "conventional initial state not reproduced");
            for (std::size_t t = 0; t < steps; ++t)
                expect(conv2.inputs[t] == conv.inputs[t],
                       "conventional input not reproduced");
        }
    });
}

CheckResult check_tracking_bound(const ScenarioConfig& cfg, double eps) {
    return run_check("tracking-bound", 1, [&] {
        opcount::reset();
        SimTrace trace = run_scenario(cfg);
        std::ostringstream detail;
        detail << "max residue gap " << trace.max_residue_gap << " (eps " << eps << "), "
               << "max input gap " << trace.max_input_gap;
        expect(trace.max_residue_gap <= eps, "residue gap " +
                                                 std::to_string(trace.max_residue_gap) +
                                                 " exceeds " + std::to_string(eps));
        expect(trace.max_input_gap <= 10 * eps,
               "input gap " + std::to_string(trace.max_input_gap) + " exceeds " +
                   std::to_string(10 * eps));
        expect(opcount::encryptions.load() == cfg.horizon + 1,
               "loop did not run with exactly one encryption per step plus the initial state");
        expect(opcount::decryptions.load() == cfg.horizon,
               "loop decrypted outside the actuator path");
    });
}

CheckResult check_detection(const ScenarioConfig& cfg, std::size_t max_delay) {
    return run_check("detection", 1, [&] {
        expect(cfg.attack.type != AttackType::None, "scenario carries no attack");
        opcount::reset();
        SimTrace trace = run_scenario(cfg);
        for (const auto& rec : trace.records)
            if (rec.t < cfg.attack.start)
                expect(!rec.alarm, "false alarm at step " + std::to_string(rec.t));
        expect(trace.first_alarm != SIZE_MAX, "attack never raised an alarm");
        expect(trace.first_alarm >= cfg.attack.start, "alarm before the attack started");
        expect(trace.first_alarm <= cfg.attack.start + max_delay,
               "alarm too late: step " + std::to_string(trace.first_alarm));
        expect(opcount::decryptions.load() == cfg.horizon,
               "detector path decrypted something");
    });
}

CheckResult check_residue_observability(const ScenarioConfig& cfg) {
    return run_check("residue-observability", 1, [&] {
        ResidueObservability ro = residue_observability(cfg.plant, cfg.ctrl);
        expect(ro.loop_rank < ro.loop_dim,
               "full closed-loop state is observable from the residue");
        expect(ro.error_rank == ro.error_dim,
               "estimation error is not observable from the residue");
    });
}

} // namespace rdlwe
