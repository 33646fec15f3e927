// Micro-benchmark for the Z_q row kernels and the encrypted loop.
// Compares the scalar reference against whatever variant dispatch picks.

#include <chrono>
#include <cstdio>
#include <vector>

#include "rdlwe/config.hpp"
#include "rdlwe/kernels.hpp"
#include "rdlwe/rng.hpp"

using namespace rdlwe;
namespace k = rdlwe::kernels;

namespace {

using Clock = std::chrono::steady_clock;

double bench_axpy(const k::Ops& ops, std::size_t width, u64 q, int reps) {
    RngStream rng(1);
    std::vector<u64> dst(width), src(width);
    for (auto& v : dst) v = rng.uniform_below(q);
    for (auto& v : src) v = rng.uniform_below(q);
    const u64 mult = rng.uniform_below(q);
    const auto start = Clock::now();
    for (int i = 0; i < reps; ++i) ops.axpy_rows(dst.data(), mult, src.data(), width, q);
    const double s = std::chrono::duration<double>(Clock::now() - start).count();
    return static_cast<double>(width) * reps / s; // elements per second
}

} // namespace

int main(int argc, char** argv) {
    const u64 q = 281474976710677ull;
    const int reps = 200000;
    std::printf("%-8s %-10s %12s\n", "kernel", "width", "Melem/s");
    for (std::size_t width : {64ul, 1026ul, 4098ul}) {
        std::printf("%-8s %-10zu %12.1f\n", "scalar", width,
                    bench_axpy(k::scalar_ops(), width, q, reps) / 1e6);
        if (const k::Ops* v = k::avx2_ops())
            std::printf("%-8s %-10zu %12.1f\n", v->name, width,
                        bench_axpy(*v, width, q, reps) / 1e6);
    }

    if (argc > 1) {
        ScenarioConfig cfg = load_scenario(argv[1]);
        const auto start = Clock::now();
        SimTrace t = run_scenario(cfg);
        const double s = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("scenario %s: %zu steps in %.3fs (%.1f us/step, kernels=%s)\n", argv[1],
                    t.records.size(), s, 1e6 * s / static_cast<double>(t.records.size()),
                    k::active().name);
    }
    return 0;
}
