// AVX2 variants of the Z_q row kernels.  Compiled with -mavx2 and reached
// only through the runtime dispatcher, which checks CPU support first.
//
// There is no 64x64->128 vector multiply in AVX2, so the modular
// multiply-accumulate uses Shoup's trick: for a fixed multiplier k < q,
// precompute k' = floor(k * 2^64 / q) once per row; then for x < q
//     Q = floor(k' * x / 2^64),  r = k*x - Q*q  (computed mod 2^64)
// satisfies r in [0, 2q), fixed up with one conditional subtraction.
// The high and low halves of the 64x64 products are assembled from
// 32x32->64 partial products.  Residues are below 2^62, so every
// intermediate fits the signed range that _mm256_cmpgt_epi64 compares.

#include "rdlwe/kernels.hpp"

#include <immintrin.h>

namespace rdlwe::kernels {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

const __m256i kLo32 = _mm256_set1_epi64x(0xFFFFFFFFll);

inline __m256i mullo64(__m256i a, __m256i b) {
    __m256i ll = _mm256_mul_epu32(a, b);
    __m256i ah = _mm256_srli_epi64(a, 32);
    __m256i bh = _mm256_srli_epi64(b, 32);
    __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(a, bh), _mm256_mul_epu32(ah, b));
    return _mm256_add_epi64(ll, _mm256_slli_epi64(cross, 32));
}

inline __m256i mulhi64(__m256i a, __m256i b) {
    __m256i ah = _mm256_srli_epi64(a, 32);
    __m256i bh = _mm256_srli_epi64(b, 32);
    __m256i ll = _mm256_mul_epu32(a, b);
    __m256i m1 = _mm256_mul_epu32(ah, b);
    __m256i m2 = _mm256_mul_epu32(a, bh);
    __m256i hh = _mm256_mul_epu32(ah, bh);
    __m256i mid = _mm256_add_epi64(_mm256_srli_epi64(ll, 32),
                                   _mm256_add_epi64(_mm256_and_si256(m1, kLo32),
                                                    _mm256_and_si256(m2, kLo32)));
    return _mm256_add_epi64(_mm256_add_epi64(hh, _mm256_srli_epi64(mid, 32)),
                            _mm256_add_epi64(_mm256_srli_epi64(m1, 32),
                                             _mm256_srli_epi64(m2, 32)));
}

// v - q on the lanes where v >= q.
inline __m256i csub(__m256i v, __m256i qv, __m256i qm1) {
    __m256i ge = _mm256_cmpgt_epi64(v, qm1);
    return _mm256_sub_epi64(v, _mm256_and_si256(ge, qv));
}

void add_rows_avx2(u64* dst, const u64* src, std::size_t n, u64 q) {
    const __m256i qv = _mm256_set1_epi64x(static_cast<long long>(q));
    const __m256i qm1 = _mm256_set1_epi64x(static_cast<long long>(q - 1));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        __m256i s = csub(_mm256_add_epi64(a, b), qv, qm1);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), s);
    }
    for (; i < n; ++i) {
        u64 s = dst[i] + src[i];
        dst[i] = s >= q ? s - q : s;
    }
}

void sub_rows_avx2(u64* dst, const u64* src, std::size_t n, u64 q) {
    const __m256i qv = _mm256_set1_epi64x(static_cast<long long>(q));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        __m256i lt = _mm256_cmpgt_epi64(b, a);
        __m256i d = _mm256_add_epi64(_mm256_sub_epi64(a, b), _mm256_and_si256(lt, qv));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), d);
    }
    for (; i < n; ++i) {
        u64 a = dst[i], b = src[i];
        dst[i] = a >= b ? a - b : a + q - b;
    }
}

void axpy_rows_avx2(u64* dst, u64 k, const u64* src, std::size_t n, u64 q) {
    const u64 kshoup = static_cast<u64>((static_cast<u128>(k) << 64) / q);
    const __m256i kv = _mm256_set1_epi64x(static_cast<long long>(k));
    const __m256i ksv = _mm256_set1_epi64x(static_cast<long long>(kshoup));
    const __m256i qv = _mm256_set1_epi64x(static_cast<long long>(q));
    const __m256i qm1 = _mm256_set1_epi64x(static_cast<long long>(q - 1));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        __m256i quot = mulhi64(ksv, x);
        __m256i r = _mm256_sub_epi64(mullo64(kv, x), mullo64(quot, qv));
        r = csub(r, qv, qm1);
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i s = csub(_mm256_add_epi64(a, r), qv, qm1);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), s);
    }
    for (; i < n; ++i) {
        u64 p = static_cast<u64>(static_cast<u128>(k) * src[i] % q);
        u64 s = dst[i] + p;
        dst[i] = s >= q ? s - q : s;
    }
}

} // namespace

const Ops* avx2_ops() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const Ops ops{add_rows_avx2, sub_rows_avx2, axpy_rows_avx2, "avx2"};
    return &ops;
}

} // namespace rdlwe::kernels
