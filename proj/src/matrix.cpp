#include "rdlwe/matrix.hpp"

#include <algorithm>

#include "rdlwe/errors.hpp"
#include "rdlwe/kernels.hpp"

namespace rdlwe {

namespace {

void require_same_mod(const ZqMatrix& a, const ZqMatrix& b) {
    if (a.mod() != b.mod()) throw ModulusMismatch{};
}

void require_same_shape(const ZqMatrix& a, const ZqMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("elementwise op on " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
}

} // namespace

ZqMatrix ZqMatrix::identity(std::size_t n, Modulus mod) {
    ZqMatrix m(n, n, mod);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

ZqMatrix ZqMatrix::from_signed(std::size_t rows, std::size_t cols, Modulus mod,
                               const std::vector<i64>& entries) {
    if (entries.size() != rows * cols)
        throw DimensionMismatch("entry count does not match shape");
    ZqMatrix m(rows, cols, mod);
    for (std::size_t i = 0; i < entries.size(); ++i) m.data()[i] = mod.reduce(entries[i]);
    return m;
}

ZqMatrix ZqMatrix::row(std::size_t r) const { return rows_slice(r, r + 1); }

ZqMatrix ZqMatrix::col(std::size_t c) const { return cols_slice(c, c + 1); }

ZqMatrix ZqMatrix::cols_slice(std::size_t c0, std::size_t c1) const {
    ZqMatrix out(rows_, c1 - c0, mod_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = c0; c < c1; ++c) out.at(r, c - c0) = at(r, c);
    return out;
}

ZqMatrix ZqMatrix::rows_slice(std::size_t r0, std::size_t r1) const {
    ZqMatrix out(r1 - r0, cols_, mod_);
    for (std::size_t r = r0; r < r1; ++r)
        std::copy(row_ptr(r), row_ptr(r) + cols_, out.row_ptr(r - r0));
    return out;
}

ZqMatrix ZqMatrix::transposed() const {
    ZqMatrix out(cols_, rows_, mod_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
    return out;
}

ZqMatrix& ZqMatrix::operator+=(const ZqMatrix& other) {
    require_same_mod(*this, other);
    require_same_shape(*this, other);
    kernels::active().add_rows(data_.data(), other.data_.data(), data_.size(), mod_.value());
    return *this;
}

ZqMatrix& ZqMatrix::operator-=(const ZqMatrix& other) {
    require_same_mod(*this, other);
    require_same_shape(*this, other);
    kernels::active().sub_rows(data_.data(), other.data_.data(), data_.size(), mod_.value());
    return *this;
}

ZqMatrix ZqMatrix::scaled(u64 k) const {
    ZqMatrix out(rows_, cols_, mod_);
    kernels::active().axpy_rows(out.data().data(), k, data_.data(), data_.size(), mod_.value());
    return out;
}

bool ZqMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](u64 v) { return v == 0; });
}

ZqMatrix matmul(const ZqMatrix& a, const ZqMatrix& b) {
    require_same_mod(a, b);
    if (a.cols() != b.rows())
        throw DimensionMismatch("matmul " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
    ZqMatrix c(a.rows(), b.cols(), a.mod());
    const auto& ops = kernels::active();
    const u64 q = a.mod().value();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        u64* dst = c.row_ptr(i);
        for (std::size_t l = 0; l < a.cols(); ++l) {
            u64 k = a.at(i, l);
            if (k == 0) continue;
            ops.axpy_rows(dst, k, b.row_ptr(l), b.cols(), q);
        }
    }
    return c;
}

ZqMatrix mat_pow(const ZqMatrix& m, u64 t) {
    if (m.rows() != m.cols()) throw DimensionMismatch("mat_pow needs a square matrix");
    ZqMatrix result = ZqMatrix::identity(m.rows(), m.mod());
    ZqMatrix base = m;
    while (t > 0) {
        if (t & 1) result = matmul(result, base);
        t >>= 1;
        if (t > 0) base = matmul(base, base);
    }
    return result;
}

ZqMatrix mat_inverse(const ZqMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse needs a square matrix");
    const std::size_t n = m.rows();
    const Modulus& mod = m.mod();
    ZqMatrix work = m;
    ZqMatrix inv = ZqMatrix::identity(n, mod);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && work.at(pivot, col) == 0) ++pivot;
        if (pivot == n) throw Singular{};
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(work.at(pivot, c), work.at(col, c));
                std::swap(inv.at(pivot, c), inv.at(col, c));
            }
        }
        const u64 pinv = mod.inv(work.at(col, col));
        for (std::size_t c = 0; c < n; ++c) {
            work.at(col, c) = mod.mul(work.at(col, c), pinv);
            inv.at(col, c) = mod.mul(inv.at(col, c), pinv);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const u64 f = work.at(r, col);
            if (f == 0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                work.at(r, c) = mod.sub(work.at(r, c), mod.mul(f, work.at(col, c)));
                inv.at(r, c) = mod.sub(inv.at(r, c), mod.mul(f, inv.at(col, c)));
            }
        }
    }
    return inv;
}

std::size_t mat_rank(ZqMatrix m) {
    const Modulus& mod = m.mod();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows() && m.at(pivot, col) == 0) ++pivot;
        if (pivot == m.rows()) continue;
        if (pivot != rank)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        const u64 pinv = mod.inv(m.at(rank, col));
        for (std::size_t c = 0; c < m.cols(); ++c) m.at(rank, c) = mod.mul(m.at(rank, c), pinv);
        for (std::size_t r = rank + 1; r < m.rows(); ++r) {
            const u64 f = m.at(r, col);
            if (f == 0) continue;
            for (std::size_t c = 0; c < m.cols(); ++c)
                m.at(r, c) = mod.sub(m.at(r, c), mod.mul(f, m.at(rank, c)));
        }
        ++rank;
    }
    return rank;
}

ZqMatrix vstack(const std::vector<ZqMatrix>& rows, std::size_t cols, Modulus mod) {
    ZqMatrix out(rows.size(), cols, mod);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].rows() != 1 || rows[i].cols() != cols)
            throw DimensionMismatch("vstack expects 1x" + std::to_string(cols) + " rows");
        std::copy(rows[i].row_ptr(0), rows[i].row_ptr(0) + cols, out.row_ptr(i));
    }
    return out;
}

std::vector<ZqMatrix> left_kernel_basis(const ZqMatrix& g) {
    if (g.cols() != 1) throw DimensionMismatch("left_kernel_basis expects a column vector");
    const std::size_t n = g.rows();
    const Modulus& mod = g.mod();
    std::vector<ZqMatrix> basis;
    std::size_t p = 0;
    while (p < n && g.at(p, 0) == 0) ++p;
    if (p == n) {
        // G = 0: the whole dual space.
        for (std::size_t i = 0; i < n; ++i) {
            ZqMatrix row(1, n, mod);
            row.at(0, i) = 1;
            basis.push_back(row);
        }
        return basis;
    }
    const u64 ginv = mod.inv(g.at(p, 0));
    for (std::size_t i = 0; i < n; ++i) {
        if (i == p) continue;
        ZqMatrix row(1, n, mod);
        row.at(0, i) = 1;
        row.at(0, p) = mod.neg(mod.mul(g.at(i, 0), ginv));
        basis.push_back(row);
    }
    return basis;
}

std::vector<ZqMatrix> extend_to_basis(const std::vector<ZqMatrix>& partial,
                                      const std::vector<ZqMatrix>& kernel) {
    if (kernel.empty()) {
        if (!partial.empty()) throw DependentInput("partial rows outside an empty span");
        return {};
    }
    const std::size_t n = kernel.front().cols();
    const Modulus mod = kernel.front().mod();
    const std::size_t span_dim = mat_rank(vstack(kernel, n, mod));

    std::vector<ZqMatrix> stacked = partial;
    if (!partial.empty()) {
        if (mat_rank(vstack(partial, n, mod)) != partial.size())
            throw DependentInput("partial rows are linearly dependent");
        std::vector<ZqMatrix> both = kernel;
        both.insert(both.end(), partial.begin(), partial.end());
        if (mat_rank(vstack(both, n, mod)) != span_dim)
            throw DependentInput("partial rows lie outside span(kernel)");
        if (partial.size() > span_dim) throw DependentInput("more partial rows than span dimension");
    }

    std::vector<ZqMatrix> added;
    std::size_t current = partial.size();
    for (const ZqMatrix& cand : kernel) {
        if (current == span_dim) break;
        std::vector<ZqMatrix> trial = stacked;
        trial.push_back(cand);
        if (mat_rank(vstack(trial, n, mod)) == current + 1) {
            stacked = std::move(trial);
            added.push_back(cand);
            ++current;
        }
    }
    return added;
}

} // namespace rdlwe
