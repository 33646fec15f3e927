#pragma once

#include <string>
#include <vector>

#include "rdlwe/sim.hpp"

namespace rdlwe {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
    double seconds;
};

/// Randomized property suites over the whole scheme.  Each runs `trials`
/// independent instances from the given seed and fails on the first exact
/// mismatch.  `trials == 0` passes vacuously (flagged in the detail).
CheckResult check_lwe_correctness(u64 seed, std::size_t trials);
CheckResult check_homomorphism(u64 seed, std::size_t trials);
CheckResult check_normal_form(u64 seed, std::size_t trials);
CheckResult check_zero_output(u64 seed, std::size_t trials);
CheckResult check_equivalence(u64 seed, std::size_t trials);
CheckResult check_disclosure(u64 seed, std::size_t trials);
CheckResult check_modified_scheme(u64 seed, std::size_t trials);
CheckResult check_transcript_bijection(u64 seed, std::size_t trials);

/// Residue/input tracking bound of the encrypted loop against the
/// reference loop; also verifies the loop ran with exactly one encryption
/// per step plus the initial state, and one decryption per step (no
/// re-encryption, no decryption in the residue path).
CheckResult check_tracking_bound(const ScenarioConfig& cfg, double eps);

/// Detection demo: an additive measurement forgery of the configured
/// magnitude must raise no alarm before onset and alarm within
/// `max_delay` steps after it, with the detector never touching the key.
CheckResult check_detection(const ScenarioConfig& cfg, std::size_t max_delay);

/// Rank structure seen from the residue (full loop hidden, error visible).
CheckResult check_residue_observability(const ScenarioConfig& cfg);

/// Test-support generator: a system with the prescribed relative degree,
/// produced in chain coordinates and conjugated by a random change of
/// basis.
SystemZq random_system_with_nu(RngStream& rng, std::size_t n, std::size_t nu, Modulus q);

/// Random valid system with a relative degree drawn from the feasible mix.
SystemZq random_system(RngStream& rng, std::size_t n, Modulus q);

} // namespace rdlwe
