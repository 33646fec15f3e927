// Acceptance gate: every scheme-level guarantee exercised end to end, one
// pass/fail line per criterion, nonzero exit if any fail.  Tolerances and
// trial counts live here, pinned.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "rdlwe/checks.hpp"
#include "rdlwe/config.hpp"

using namespace rdlwe;

namespace {

constexpr u64 kSeed = 20240801;

struct Criterion {
    std::string id;
    CheckResult result;
    double time_limit;
};

bool report(const Criterion& c) {
    const bool ok = c.result.pass && c.result.seconds < c.time_limit;
    std::printf("%-14s %-26s %s  (%.2fs / limit %.0fs)  %s\n", c.id.c_str(),
                c.result.name.c_str(), ok ? "PASS" : "FAIL", c.result.seconds, c.time_limit,
                c.result.detail.c_str());
    return ok;
}

std::string fixture(const char* name) { return std::string(RDLWE_CONFIG_DIR) + "/" + name; }

} // namespace

int main() {
    std::vector<Criterion> criteria;
    criteria.push_back({"criterion-01", check_lwe_correctness(kSeed, 1000), 1.0});
    criteria.push_back({"criterion-02", check_homomorphism(kSeed, 200), 1.0});
    criteria.push_back({"criterion-03", check_normal_form(kSeed, 200), 5.0});
    criteria.push_back({"criterion-04", check_zero_output(kSeed, 100), 5.0});
    criteria.push_back({"criterion-05", check_equivalence(kSeed, 100), 5.0});
    criteria.push_back({"criterion-06", check_disclosure(kSeed, 100), 10.0});
    criteria.push_back({"criterion-07", check_modified_scheme(kSeed, 200), 2.0});
    criteria.push_back({"criterion-08", check_transcript_bijection(kSeed, 50), 5.0});

    try {
        ScenarioConfig demo = load_scenario(fixture("double_integrator.json"));
        criteria.push_back({"criterion-09", check_tracking_bound(demo, 1e-3), 60.0});
    } catch (const Error& e) {
        criteria.push_back(
            {"criterion-09", CheckResult{"tracking-bound", false, e.what(), 0.0}, 60.0});
    }
    try {
        ScenarioConfig attack = load_scenario(fixture("attack_bias.json"));
        criteria.push_back({"criterion-10", check_detection(attack, 2), 60.0});
        criteria.push_back({"criterion-11", check_residue_observability(attack), 1.0});
    } catch (const Error& e) {
        criteria.push_back({"criterion-10", CheckResult{"detection", false, e.what(), 0.0}, 60.0});
        criteria.push_back(
            {"criterion-11", CheckResult{"residue-observability", false, e.what(), 0.0}, 1.0});
    }

    bool all = true;
    for (const auto& c : criteria) all = report(c) && all;
    std::printf("%s\n", all ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES PRESENT");
    return all ? 0 : 1;
}
