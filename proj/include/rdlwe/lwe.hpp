#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "rdlwe/gaussian.hpp"
#include "rdlwe/matrix.hpp"
#include "rdlwe/rng.hpp"

namespace rdlwe {

struct SecretKey {
    ZqMatrix key; // N x 1 column of uniform residues
    double sigma; // error std-dev tied to this key's parameter set

    std::size_t dim() const { return key.rows(); }
    const Modulus& mod() const { return key.mod(); }
};

SecretKey keygen(std::size_t dim, Modulus q, double sigma, RngStream& rng);

enum class CtKind : std::uint8_t { Conventional = 0, Modified = 1 };

/// Row-block ciphertext over Z_q.  Each of the n rows encrypts one message
/// coordinate: [masked message, random block] (width N+1), with an extra
/// disclosed column appended for the Modified kind (width N+2).
class Ciphertext {
public:
    Ciphertext(ZqMatrix body, CtKind kind);

    const ZqMatrix& body() const { return body_; }
    ZqMatrix& body() { return body_; }
    CtKind kind() const { return kind_; }
    std::size_t rows() const { return body_.rows(); }
    std::size_t width() const { return body_.cols(); }
    std::size_t key_dim() const {
        return width() - 1 - (kind_ == CtKind::Modified ? 1 : 0);
    }
    const Modulus& mod() const { return body_.mod(); }

    ZqMatrix masked_message() const { return body_.col(0); }
    ZqMatrix random_block() const { return body_.cols_slice(1, 1 + key_dim()); }
    /// Disclosed last column (Modified kind only).
    ZqMatrix disclosed() const;

    Ciphertext& operator+=(const Ciphertext& other);
    friend Ciphertext operator+(Ciphertext a, const Ciphertext& b) { return a += b; }

    bool operator==(const Ciphertext& other) const {
        return kind_ == other.kind_ && body_ == other.body_;
    }

private:
    ZqMatrix body_;
    CtKind kind_;
};

/// Randomness consumed by one encryption; exposed so tests can pin the
/// draws and so the conventional and modified schemes can share them.
struct LweRandomness {
    ZqMatrix a;          // rows x N uniform
    std::vector<i64> e;  // rows, discrete Gaussian
};

LweRandomness sample_lwe_randomness(std::size_t rows, const SecretKey& sk,
                                    const GaussianSampler& noise, RngStream& rng);

/// Mask A*sk + e mod q (one value per row).
ZqMatrix lwe_mask(const LweRandomness& rand, const SecretKey& sk);

Ciphertext encrypt_with(const ZqMatrix& v, const SecretKey& sk, const LweRandomness& rand);
Ciphertext encrypt(const ZqMatrix& v, const SecretKey& sk, RngStream& rng);

/// body * [1, -sk]^T mod q.  Conventional kind only.
ZqMatrix decrypt(const Ciphertext& c, const SecretKey& sk);

/// K * body mod q; kind is preserved.
Ciphertext hom_matmul(const ZqMatrix& k, const Ciphertext& c);

/// Serialization: header {magic "ZQCT", version, kind, q, N, rows}
/// followed by the body entries, row-major little-endian u64.
std::vector<std::uint8_t> serialize(const Ciphertext& c);
Ciphertext deserialize(const std::vector<std::uint8_t>& bytes);
void save_ciphertext(const Ciphertext& c, const std::string& path);
Ciphertext load_ciphertext(const std::string& path);

/// Operation counters, used to verify structurally that a closed loop
/// never decrypts inside the residue path and never re-encrypts.
namespace opcount {
extern std::atomic<std::uint64_t> encryptions;
extern std::atomic<std::uint64_t> decryptions;
void reset();
} // namespace opcount

} // namespace rdlwe
