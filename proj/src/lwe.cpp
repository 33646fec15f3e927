#include "rdlwe/lwe.hpp"

#include <cstring>
#include <fstream>

#include "rdlwe/errors.hpp"

namespace rdlwe {

namespace opcount {
std::atomic<std::uint64_t> encryptions{0};
std::atomic<std::uint64_t> decryptions{0};
void reset() {
    encryptions = 0;
    decryptions = 0;
}
} // namespace opcount

SecretKey keygen(std::size_t dim, Modulus q, double sigma, RngStream& rng) {
    if (dim < 1) throw Error("key dimension must be at least 1");
    ZqMatrix key(dim, 1, q);
    for (std::size_t i = 0; i < dim; ++i) key.at(i, 0) = rng.uniform(q);
    return SecretKey{std::move(key), sigma};
}

Ciphertext::Ciphertext(ZqMatrix body, CtKind kind) : body_(std::move(body)), kind_(kind) {
    const std::size_t extra = kind_ == CtKind::Modified ? 2 : 1;
    if (body_.cols() < extra + 1)
        throw WidthMismatch("ciphertext narrower than its kind allows");
}

ZqMatrix Ciphertext::disclosed() const {
    if (kind_ != CtKind::Modified)
        throw WidthMismatch("conventional ciphertexts carry no disclosed column");
    return body_.col(width() - 1);
}

Ciphertext& Ciphertext::operator+=(const Ciphertext& other) {
    if (kind_ != other.kind_) throw WidthMismatch("adding ciphertexts of different kinds");
    body_ += other.body_;
    return *this;
}

LweRandomness sample_lwe_randomness(std::size_t rows, const SecretKey& sk,
                                    const GaussianSampler& noise, RngStream& rng) {
    ZqMatrix a(rows, sk.dim(), sk.mod());
    for (auto& v : a.data()) v = rng.uniform(sk.mod());
    std::vector<i64> e(rows);
    for (auto& v : e) v = noise.sample(rng);
    return LweRandomness{std::move(a), std::move(e)};
}

ZqMatrix lwe_mask(const LweRandomness& rand, const SecretKey& sk) {
    ZqMatrix mask = matmul(rand.a, sk.key);
    const Modulus& q = sk.mod();
    for (std::size_t i = 0; i < mask.rows(); ++i)
        mask.at(i, 0) = q.add(mask.at(i, 0), q.reduce(rand.e[i]));
    return mask;
}

Ciphertext encrypt_with(const ZqMatrix& v, const SecretKey& sk, const LweRandomness& rand) {
    if (v.cols() != 1) throw DimensionMismatch("message must be a column vector");
    if (v.mod() != sk.mod()) throw ModulusMismatch{};
    if (rand.a.rows() != v.rows() || rand.e.size() != v.rows())
        throw DimensionMismatch("randomness rows do not match the message");
    const std::size_t n = v.rows();
    const std::size_t N = sk.dim();
    ZqMatrix mask = lwe_mask(rand, sk);
    ZqMatrix body(n, N + 1, v.mod());
    for (std::size_t i = 0; i < n; ++i) {
        body.at(i, 0) = v.mod().add(v.at(i, 0), mask.at(i, 0));
        for (std::size_t j = 0; j < N; ++j) body.at(i, 1 + j) = rand.a.at(i, j);
    }
    opcount::encryptions.fetch_add(1, std::memory_order_relaxed);
    return Ciphertext(std::move(body), CtKind::Conventional);
}

Ciphertext encrypt(const ZqMatrix& v, const SecretKey& sk, RngStream& rng) {
    GaussianSampler noise(sk.sigma);
    return encrypt_with(v, sk, sample_lwe_randomness(v.rows(), sk, noise, rng));
}

ZqMatrix decrypt(const Ciphertext& c, const SecretKey& sk) {
    if (c.kind() != CtKind::Conventional)
        throw WidthMismatch("decrypt expects a conventional ciphertext (width N+1)");
    if (c.key_dim() != sk.dim()) throw WidthMismatch("ciphertext width does not match the key");
    if (c.mod() != sk.mod()) throw ModulusMismatch{};
    ZqMatrix out = c.masked_message();
    out -= matmul(c.random_block(), sk.key);
    opcount::decryptions.fetch_add(1, std::memory_order_relaxed);
    return out;
}

Ciphertext hom_matmul(const ZqMatrix& k, const Ciphertext& c) {
    return Ciphertext(matmul(k, c.body()), c.kind());
}

namespace {

constexpr char kMagic[4] = {'Z', 'Q', 'C', 'T'};
constexpr std::uint8_t kVersion = 1;

void put_u64(std::vector<std::uint8_t>& out, u64 v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

u64 get_u64(const std::vector<std::uint8_t>& in, std::size_t off) {
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(in[off + i]) << (8 * i);
    return v;
}

} // namespace

std::vector<std::uint8_t> serialize(const Ciphertext& c) {
    std::vector<std::uint8_t> out;
    out.reserve(32 + c.body().data().size() * 8);
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    out.push_back(static_cast<std::uint8_t>(c.kind()));
    out.push_back(0);
    out.push_back(0);
    put_u64(out, c.mod().value());
    put_u64(out, c.key_dim());
    put_u64(out, c.rows());
    for (u64 v : c.body().data()) put_u64(out, v);
    return out;
}

Ciphertext deserialize(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 32) throw FormatError("truncated header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad magic");
    if (bytes[4] != kVersion) throw FormatError("unsupported version");
    if (bytes[5] > 1) throw FormatError("unknown ciphertext kind");
    const CtKind kind = static_cast<CtKind>(bytes[5]);
    const u64 qv = get_u64(bytes, 8);
    const u64 N = get_u64(bytes, 16);
    const u64 rows = get_u64(bytes, 24);
    const u64 width = N + 1 + (kind == CtKind::Modified ? 1 : 0);
    if (rows > (u64{1} << 24) || width > (u64{1} << 24)) throw FormatError("implausible shape");
    if (bytes.size() != 32 + rows * width * 8) throw FormatError("payload size mismatch");
    Modulus q = [&] {
        try {
            return Modulus(qv);
        } catch (const Error& err) {
            throw FormatError(std::string("invalid modulus: ") + err.what());
        }
    }();
    ZqMatrix body(rows, width, q);
    for (std::size_t i = 0; i < rows * width; ++i) {
        u64 v = get_u64(bytes, 32 + i * 8);
        if (v >= qv) throw FormatError("entry out of range");
        body.data()[i] = v;
    }
    return Ciphertext(std::move(body), kind);
}

void save_ciphertext(const Ciphertext& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    auto bytes = serialize(c);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Ciphertext load_ciphertext(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

} // namespace rdlwe
