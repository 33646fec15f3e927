#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "rdlwe/cli.hpp"
#include "rdlwe/config.hpp"

using namespace rdlwe;

namespace {

int run_cli(std::initializer_list<const char*> args, std::string* out = nullptr) {
    std::vector<const char*> argv{"rdlwe"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream captured;
    std::streambuf* old = nullptr;
    if (out) old = std::cout.rdbuf(captured.rdbuf());
    const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data());
    if (out) {
        std::cout.rdbuf(old);
        *out = captured.str();
    }
    return code;
}

std::string fixture(const char* name) { return std::string(RDLWE_CONFIG_DIR) + "/" + name; }

std::size_t line_count(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

} // namespace

TEST_CASE("run writes the trace and a summary") {
    const std::string out = "cli_trace.csv";
    std::string text;
    const std::string cfg = fixture("double_integrator_test.json");
    CHECK(run_cli({"run", "--config", cfg.c_str(), "--out", out.c_str()}, &text) == 0);
    CHECK(text.find("max_residue_gap=") != std::string::npos);
    ScenarioConfig parsed = load_scenario(cfg);
    CHECK(line_count(out) == parsed.horizon + 1); // header + one row per step

    // reruns are byte-identical
    std::ifstream first(out);
    std::stringstream a;
    a << first.rdbuf();
    CHECK(run_cli({"run", "--config", cfg.c_str(), "--out", out.c_str()}) == 0);
    std::ifstream second(out);
    std::stringstream b;
    b << second.rdbuf();
    CHECK(a.str() == b.str());
    std::remove(out.c_str());
}

TEST_CASE("malformed config exits 3 with a diagnostic") {
    const char* path = "broken.json";
    {
        std::ofstream f(path);
        f << "{\"plant\": 12}";
    }
    CHECK(run_cli({"run", "--config", path}) == 3);
    std::remove(path);
    CHECK(run_cli({"run", "--config", "does_not_exist.json"}) == 3);
}

TEST_CASE("undersized modulus exits 2") {
    const std::string cfg = fixture("overflow_q.json");
    CHECK(run_cli({"run", "--config", cfg.c_str()}) == 2);
}

TEST_CASE("verify reports per-property lines") {
    const std::string cfg = fixture("double_integrator_test.json");
    std::string text;
    CHECK(run_cli({"verify", "--config", cfg.c_str(), "--trials", "5"}, &text) == 0);
    CHECK(text.find("lwe-correctness") != std::string::npos);
    CHECK(text.find("normal-form") != std::string::npos);
    CHECK(text.find("tracking-bound") != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);
}

TEST_CASE("verify canary forces the failure path") {
    const std::string cfg = fixture("double_integrator_test.json");
    std::string text;
    CHECK(run_cli({"verify", "--config", cfg.c_str(), "--trials", "1", "--canary"}, &text) == 1);
    CHECK(text.find("canary") != std::string::npos);
    CHECK(text.find("FAIL") != std::string::npos);
}

TEST_CASE("verify --trials 0 passes vacuously") {
    const std::string cfg = fixture("double_integrator_test.json");
    std::string text;
    CHECK(run_cli({"verify", "--config", cfg.c_str(), "--trials", "0"}, &text) == 0);
    CHECK(text.find("vacuous") != std::string::npos);
}

TEST_CASE("omitted threshold defaults to the calibrated value") {
    nlohmann::json j;
    {
        std::ifstream in(fixture("double_integrator_test.json"));
        in >> j;
    }
    j["sim"].erase("threshold");
    ScenarioConfig cfg = scenario_from_json(j);
    // 5x the peak attack-free reference residue, which is |y(0) - C xh0| = 1
    CHECK(cfg.threshold == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("keygen writes a loadable key") {
    const char* path = "cli_key.json";
    std::string text;
    CHECK(run_cli({"keygen", "--out", path, "--seed", "9"}, &text) == 0);
    SecretKey sk = load_key(path);
    CHECK(sk.dim() == 4);
    CHECK(sk.mod().value() == 97);
    // deterministic under the seed
    CHECK(run_cli({"keygen", "--out", path, "--seed", "9"}) == 0);
    SecretKey again = load_key(path);
    CHECK(again.key == sk.key);
    std::remove(path);
}

TEST_CASE("inspect prints the disclosed column") {
    Modulus q{97};
    RngStream rng(5);
    SecretKey sk = keygen(4, q, 0.0, rng);
    ZqMatrix body(2, 6, q);
    body.at(0, 5) = 11;
    body.at(1, 5) = 22;
    const char* path = "inspect_ct.bin";
    save_ciphertext(Ciphertext(body, CtKind::Modified), path);

    std::string text;
    CHECK(run_cli({"inspect", path}, &text) == 0);
    CHECK(text.find("modified") != std::string::npos);
    CHECK(text.find("11 22") != std::string::npos);

    ZqMatrix v(1, 1, q);
    v.at(0, 0) = 7;
    save_ciphertext(encrypt(v, sk, rng), path);
    CHECK(run_cli({"inspect", path}, &text) == 0);
    CHECK(text.find("no disclosed column") != std::string::npos);

    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << "ZQCT";
    }
    CHECK(run_cli({"inspect", path}) == 3);
    std::remove(path);
}
