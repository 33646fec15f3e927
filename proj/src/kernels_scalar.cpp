#include "rdlwe/kernels.hpp"

namespace rdlwe::kernels {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

void add_rows_scalar(u64* dst, const u64* src, std::size_t n, u64 q) {
    for (std::size_t i = 0; i < n; ++i) {
        u64 s = dst[i] + src[i];
        dst[i] = s >= q ? s - q : s;
    }
}

void sub_rows_scalar(u64* dst, const u64* src, std::size_t n, u64 q) {
    for (std::size_t i = 0; i < n; ++i) {
        u64 a = dst[i], b = src[i];
        dst[i] = a >= b ? a - b : a + q - b;
    }
}

void axpy_rows_scalar(u64* dst, u64 k, const u64* src, std::size_t n, u64 q) {
    for (std::size_t i = 0; i < n; ++i) {
        u64 p = static_cast<u64>(static_cast<u128>(k) * src[i] % q);
        u64 s = dst[i] + p;
        dst[i] = s >= q ? s - q : s;
    }
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{add_rows_scalar, sub_rows_scalar, axpy_rows_scalar, "scalar"};
    return ops;
}

} // namespace rdlwe::kernels
