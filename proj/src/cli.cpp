#include "rdlwe/cli.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "rdlwe/checks.hpp"
#include "rdlwe/config.hpp"
#include "rdlwe/errors.hpp"

namespace rdlwe::cli {

namespace {

constexpr u64 kDefaultSeed = 20240801;

int cmd_run(const std::string& config_path, const std::string& out_path,
            std::optional<u64> seed) {
    ScenarioConfig cfg = load_scenario(config_path);
    if (seed) cfg.crypto.seed = *seed;
    SimTrace trace = run_scenario(cfg);
    if (out_path.empty()) {
        write_csv(trace, std::cout);
    } else {
        write_csv_file(trace, out_path);
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "steps=%zu max_residue_gap=%.17g max_input_gap=%.17g alarms=%zu",
                  trace.records.size(), trace.max_residue_gap, trace.max_input_gap,
                  trace.alarm_count);
    std::cout << buf;
    if (trace.first_alarm != SIZE_MAX) std::cout << " first_alarm=" << trace.first_alarm;
    std::cout << "\n";
    return 0;
}

int cmd_verify(const std::string& profile, std::string config_path, u64 seed,
               std::optional<std::size_t> trials_override, bool canary) {
    const bool demo = profile == "demo";
    auto trials = [&](std::size_t demo_count, std::size_t test_count) {
        return trials_override.value_or(demo ? demo_count : test_count);
    };

    std::vector<CheckResult> results;
    results.push_back(check_lwe_correctness(seed, trials(1000, 100)));
    results.push_back(check_homomorphism(seed, trials(200, 50)));
    results.push_back(check_normal_form(seed, trials(200, 50)));
    results.push_back(check_zero_output(seed, trials(100, 30)));
    results.push_back(check_equivalence(seed, trials(100, 30)));
    results.push_back(check_disclosure(seed, trials(100, 20)));
    results.push_back(check_modified_scheme(seed, trials(200, 50)));
    results.push_back(check_transcript_bijection(seed, trials(50, 10)));

    if (config_path.empty())
        config_path = demo ? "configs/double_integrator.json"
                           : "configs/double_integrator_test.json";
    if (trials_override == std::size_t{0}) {
        results.push_back(
            CheckResult{"tracking-bound", true, "vacuous pass: 0 trials requested", 0.0});
        results.push_back(
            CheckResult{"residue-observability", true, "vacuous pass: 0 trials requested", 0.0});
    } else {
        try {
            ScenarioConfig cfg = load_scenario(config_path);
            results.push_back(check_tracking_bound(cfg, 1e-3));
            results.push_back(check_residue_observability(cfg));
        } catch (const ConfigError& e) {
            std::cerr << "verify: cannot load scenario " << config_path << ": " << e.what()
                      << "\n       pass --config <scenario.json> to run the loop properties\n";
            return 3;
        }
    }

    if (canary)
        results.push_back(CheckResult{"canary", false, "forced failure requested", 0.0});

    bool all_pass = true;
    for (const auto& r : results) {
        char line[512];
        std::snprintf(line, sizeof line, "%-26s %s  (%.2fs)  %s\n", r.name.c_str(),
                      r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
        std::cout << line;
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

int cmd_keygen(const std::string& profile, const std::string& out_path, u64 seed) {
    const bool demo = profile == "demo";
    const u64 q = demo ? next_prime(u64{1} << 48) : 97;
    const std::size_t dim = demo ? 1024 : 4;
    const double sigma = demo ? 3.2 : 0.0;
    RngStream rng(seed);
    SecretKey sk = keygen(dim, Modulus(q), sigma, rng);
    save_key(sk, out_path);
    std::cout << "wrote " << out_path << " (q=" << q << " N=" << dim << " sigma=" << sigma
              << ")\n";
    return 0;
}

int cmd_inspect(const std::string& path) {
    Ciphertext ct = load_ciphertext(path);
    std::cout << "rows: " << ct.rows() << "\n"
              << "width: " << ct.width() << " (N=" << ct.key_dim() << ")\n"
              << "modulus: " << ct.mod().value() << "\n"
              << "kind: " << (ct.kind() == CtKind::Modified ? "modified" : "conventional")
              << "\n";
    if (ct.kind() == CtKind::Modified) {
        std::cout << "disclosed column:";
        ZqMatrix d = ct.disclosed();
        for (std::size_t i = 0; i < d.rows(); ++i) std::cout << " " << d.at(i, 0);
        std::cout << "\n";
    } else {
        std::cout << "no disclosed column\n";
    }
    return 0;
}

} // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"Residue-disclosing encrypted control"};
    app.require_subcommand(1);

    std::string config_path, out_path, profile = "test", inspect_path, key_out = "key.json";
    std::optional<u64> seed_opt;
    std::optional<std::size_t> trials_opt;
    bool canary = false;

    auto* run = app.add_subcommand("run", "simulate a scenario and emit its CSV trace");
    run->add_option("--config", config_path, "scenario JSON")->required();
    run->add_option("--out", out_path, "CSV output path (default: stdout)");
    run->add_option("--seed", seed_opt, "override the scenario seed");

    auto* verify = app.add_subcommand("verify", "run the randomized property suites");
    verify->add_option("--config", config_path, "scenario JSON for the loop properties");
    verify->add_option("--profile", profile, "test|demo")
        ->check(CLI::IsMember({"test", "demo"}));
    verify->add_option("--seed", seed_opt, "suite seed");
    verify->add_option("--trials", trials_opt, "override the per-suite trial count");
    verify->add_flag("--canary", canary, "force one failing check (build canary)");

    auto* kg = app.add_subcommand("keygen", "generate a secret key file");
    kg->add_option("--out", key_out, "key output path");
    kg->add_option("--profile", profile, "test|demo")->check(CLI::IsMember({"test", "demo"}));
    kg->add_option("--seed", seed_opt, "key seed");

    auto* inspect = app.add_subcommand("inspect", "describe a serialized ciphertext");
    inspect->add_option("file", inspect_path, "ciphertext file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_path, seed_opt);
        if (verify->parsed())
            return cmd_verify(profile, config_path, seed_opt.value_or(kDefaultSeed), trials_opt,
                              canary);
        if (kg->parsed()) return cmd_keygen(profile, key_out, seed_opt.value_or(kDefaultSeed));
        if (inspect->parsed()) return cmd_inspect(inspect_path);
    } catch (const ModulusTooSmall& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace rdlwe::cli
