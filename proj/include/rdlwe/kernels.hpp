#pragma once

#include <cstddef>
#include <cstdint>

namespace rdlwe::kernels {

/// Row-wide Z_q kernels.  All values are canonical residues below a prime
/// q < 2^62; results are canonical again.  These are the inner loops of
/// every homomorphic matrix product, so they come in a scalar reference
/// implementation and SIMD variants selected once at runtime.
struct Ops {
    // dst[i] = (dst[i] + src[i]) mod q
    void (*add_rows)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n, std::uint64_t q);
    // dst[i] = (dst[i] - src[i]) mod q
    void (*sub_rows)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n, std::uint64_t q);
    // dst[i] = (dst[i] + k * src[i]) mod q, with k < q
    void (*axpy_rows)(std::uint64_t* dst, std::uint64_t k, const std::uint64_t* src, std::size_t n,
                      std::uint64_t q);
    const char* name;
};

const Ops& scalar_ops();

/// AVX2 variant, or nullptr when unsupported (at compile or run time).
const Ops* avx2_ops();

/// The active kernel set.  Picks the widest supported variant on first
/// use; the RDLWE_KERNELS environment variable ("scalar", "avx2")
/// overrides the choice.
const Ops& active();

/// Test hook: force a kernel set (pass nullptr to re-detect).
void force(const Ops* ops);

} // namespace rdlwe::kernels
