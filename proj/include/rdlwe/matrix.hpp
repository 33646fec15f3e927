#pragma once

#include <cstddef>
#include <vector>

#include "rdlwe/field.hpp"

namespace rdlwe {

/// Dense row-major matrix of canonical residues mod a shared prime q.
/// Zero-sized dimensions are legal and behave like empty sums/products.
class ZqMatrix {
public:
    ZqMatrix(std::size_t rows, std::size_t cols, Modulus mod)
        : rows_(rows), cols_(cols), mod_(mod), data_(rows * cols, 0) {}

    static ZqMatrix identity(std::size_t n, Modulus mod);
    static ZqMatrix from_signed(std::size_t rows, std::size_t cols, Modulus mod,
                                const std::vector<i64>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Modulus& mod() const { return mod_; }

    u64& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    u64 at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    u64* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
    const u64* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

    const std::vector<u64>& data() const { return data_; }
    std::vector<u64>& data() { return data_; }

    ZqMatrix row(std::size_t r) const;
    ZqMatrix col(std::size_t c) const;
    /// Columns [c0, c1) as a new matrix.
    ZqMatrix cols_slice(std::size_t c0, std::size_t c1) const;
    /// Rows [r0, r1) as a new matrix.
    ZqMatrix rows_slice(std::size_t r0, std::size_t r1) const;
    ZqMatrix transposed() const;

    ZqMatrix& operator+=(const ZqMatrix& other);
    ZqMatrix& operator-=(const ZqMatrix& other);
    friend ZqMatrix operator+(ZqMatrix a, const ZqMatrix& b) { return a += b; }
    friend ZqMatrix operator-(ZqMatrix a, const ZqMatrix& b) { return a -= b; }

    ZqMatrix scaled(u64 k) const;

    bool operator==(const ZqMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && mod_ == other.mod_ &&
               data_ == other.data_;
    }
    bool operator!=(const ZqMatrix& other) const { return !(*this == other); }

    bool is_zero() const;

private:
    std::size_t rows_, cols_;
    Modulus mod_;
    std::vector<u64> data_;
};

/// (A*B) mod q.  Routed through the row kernels: for each output row,
/// accumulate A(i,l) * B.row(l).
ZqMatrix matmul(const ZqMatrix& a, const ZqMatrix& b);

/// M^t mod q by binary exponentiation; M^0 = I.
ZqMatrix mat_pow(const ZqMatrix& m, u64 t);

/// Gauss-Jordan inverse over Z_q.  Pivot choice is deterministic:
/// leftmost column, then topmost unused row with a nonzero entry.
/// Throws Singular when some column has no pivot.
ZqMatrix mat_inverse(const ZqMatrix& m);

/// Rank by forward elimination with the same deterministic pivot rule.
std::size_t mat_rank(ZqMatrix m);

/// Stack row vectors (each 1 x n) into one matrix.
ZqMatrix vstack(const std::vector<ZqMatrix>& rows, std::size_t cols, Modulus mod);

/// Basis of { v : v*G = 0 mod q } for a column G (n x 1), as row vectors.
/// n-1 rows when G != 0, n rows when G = 0.  Row order is deterministic.
std::vector<ZqMatrix> left_kernel_basis(const ZqMatrix& g);

/// Complete `partial` (independent rows inside span(kernel)) to a basis of
/// span(kernel); returns only the added rows, in the order the kernel rows
/// were accepted by elimination.  Throws DependentInput when the premise
/// fails.
std::vector<ZqMatrix> extend_to_basis(const std::vector<ZqMatrix>& partial,
                                      const std::vector<ZqMatrix>& kernel);

} // namespace rdlwe
