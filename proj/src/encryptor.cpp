#include "rdlwe/encryptor.hpp"

#include "rdlwe/errors.hpp"

namespace rdlwe {

EncryptorSession::EncryptorSession(SecretKey sk, const SystemZq& sys, RngStream rng)
    : sk_(std::move(sk)),
      nf_(build_transform(sys)),
      noise_(sk_.sigma),
      rng_(std::move(rng)),
      init_rand_(sys.dim(), sk_.dim(), sys.mod()),
      init_mask_(sys.dim(), 1, sys.mod()),
      disclosed_init_(sys.dim(), 1, sys.mod()),
      zd_state_(sys.dim() - nf_.nu, 1, sys.mod()) {
    seed_masking(sample_lwe_randomness(sys.dim(), sk_, noise_, rng_));
}

EncryptorSession::EncryptorSession(SecretKey sk, const SystemZq& sys, RngStream rng,
                                   LweRandomness init_rand)
    : sk_(std::move(sk)),
      nf_(build_transform(sys)),
      noise_(sk_.sigma),
      rng_(std::move(rng)),
      init_rand_(sys.dim(), sk_.dim(), sys.mod()),
      init_mask_(sys.dim(), 1, sys.mod()),
      disclosed_init_(sys.dim(), 1, sys.mod()),
      zd_state_(sys.dim() - nf_.nu, 1, sys.mod()) {
    if (init_rand.a.rows() != sys.dim())
        throw DimensionMismatch("initial-state randomness rows must match the system order");
    seed_masking(std::move(init_rand));
}

void EncryptorSession::seed_masking(LweRandomness init_rand) {
    init_mask_ = lwe_mask(init_rand, sk_);
    init_rand_ = std::move(init_rand.a);
    disclosed_init_ = matmul(nf_.from_chain, matmul(nf_.to_chain, init_mask_));
    zd_state_ = matmul(nf_.to_zd, init_mask_);
}

Ciphertext EncryptorSession::encrypt_initial_state(const ZqMatrix& x0) {
    if (init_done_) throw SessionOrderViolation("initial state already encrypted");
    if (inputs_started_)
        throw SessionOrderViolation("initial state must be encrypted before any input");
    if (x0.rows() != nf_.dim() || x0.cols() != 1)
        throw DimensionMismatch("initial state must be n x 1");
    const std::size_t n = nf_.dim();
    const std::size_t N = sk_.dim();
    const Modulus& q = nf_.mod();
    ZqMatrix body(n, N + 2, q);
    for (std::size_t i = 0; i < n; ++i) {
        u64 concealed = q.sub(init_mask_.at(i, 0), disclosed_init_.at(i, 0));
        body.at(i, 0) = q.add(x0.at(i, 0), concealed);
        for (std::size_t j = 0; j < N; ++j) body.at(i, 1 + j) = init_rand_.at(i, j);
        body.at(i, N + 1) = disclosed_init_.at(i, 0);
    }
    init_done_ = true;
    opcount::encryptions.fetch_add(1, std::memory_order_relaxed);
    return Ciphertext(std::move(body), CtKind::Modified);
}

Ciphertext EncryptorSession::encrypt_input(u64 y) {
    return encrypt_input_with(y, sample_lwe_randomness(1, sk_, noise_, rng_));
}

Ciphertext EncryptorSession::encrypt_input_with(u64 y, const LweRandomness& rand) {
    if (rand.a.rows() != 1 || rand.e.size() != 1)
        throw DimensionMismatch("input randomness must cover exactly one row");
    inputs_started_ = true;
    const Modulus& q = nf_.mod();
    const std::size_t N = sk_.dim();
    if (y >= q.value()) throw Error("input must be a canonical residue");

    const u64 mask = lwe_mask(rand, sk_).at(0, 0);
    const u64 shift = q.mul(q.inv(nf_.input_gain), matmul(nf_.head_from_zd, zd_state_).at(0, 0));
    const u64 disclosed = q.add(mask, shift);

    ZqMatrix body(1, N + 2, q);
    body.at(0, 0) = q.add(y, q.sub(mask, disclosed));
    for (std::size_t j = 0; j < N; ++j) body.at(0, 1 + j) = rand.a.at(0, j);
    body.at(0, N + 1) = disclosed;

    zd_state_ = matmul(nf_.zd_update, zd_state_);
    ++step_;
    opcount::encryptions.fetch_add(1, std::memory_order_relaxed);
    return Ciphertext(std::move(body), CtKind::Modified);
}

std::vector<u64> EncryptorSession::preview_masking_shifts(std::size_t count) const {
    const Modulus& q = nf_.mod();
    const u64 ginv = q.inv(nf_.input_gain);
    ZqMatrix z = zd_state_;
    std::vector<u64> shifts;
    shifts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        shifts.push_back(q.mul(ginv, matmul(nf_.head_from_zd, z).at(0, 0)));
        z = matmul(nf_.zd_update, z);
    }
    return shifts;
}

ZqMatrix decrypt_mod(const Ciphertext& c, const SecretKey& sk) {
    if (c.kind() != CtKind::Modified)
        throw WidthMismatch("decrypt_mod expects a modified ciphertext (width N+2)");
    if (c.key_dim() != sk.dim()) throw WidthMismatch("ciphertext width does not match the key");
    if (c.mod() != sk.mod()) throw ModulusMismatch{};
    ZqMatrix out = c.masked_message();
    out -= matmul(c.random_block(), sk.key);
    out += c.disclosed();
    opcount::decryptions.fetch_add(1, std::memory_order_relaxed);
    return out;
}

u64 disclosed_residue(const Ciphertext& residue_row) { return residue_row.body().at(0, 0); }

namespace {

Ciphertext fold_disclosed(const Ciphertext& c) {
    const std::size_t w = c.width();
    ZqMatrix body = c.body().cols_slice(0, w - 1);
    const Modulus& q = c.mod();
    for (std::size_t i = 0; i < c.rows(); ++i)
        body.at(i, 0) = q.add(body.at(i, 0), c.body().at(i, w - 1));
    return Ciphertext(std::move(body), CtKind::Conventional);
}

std::vector<u64> masked_inputs(const std::vector<Ciphertext>& cts) {
    std::vector<u64> ys;
    ys.reserve(cts.size());
    for (const auto& c : cts) {
        if (c.rows() != 1) throw DimensionMismatch("input ciphertexts must be single rows");
        ys.push_back(c.body().at(0, 0));
    }
    return ys;
}

} // namespace

std::pair<ConventionalTranscript, std::vector<u64>>
transcript_to_conventional(const ModifiedTranscript& mt, const SystemZq& sys) {
    ConventionalTranscript ct{fold_disclosed(mt.init), {}};
    ct.inputs.reserve(mt.inputs.size());
    for (const auto& c : mt.inputs) ct.inputs.push_back(fold_disclosed(c));
    // The residue record is what any observer reads off the masked message
    // columns by iterating the public system.
    std::vector<u64> residues =
        output_record(sys, mt.init.masked_message(), masked_inputs(mt.inputs));
    return {std::move(ct), std::move(residues)};
}

ModifiedTranscript transcript_to_modified(const ConventionalTranscript& ct,
                                          const std::vector<u64>& residues, const SystemZq& sys) {
    const std::size_t steps = ct.inputs.size();
    const Modulus& q = sys.mod();
    NormalForm nf = build_transform(sys);
    if (residues.size() < steps + nf.nu)
        throw InsufficientHistory("residue record must extend nu steps past the horizon");

    // Difference between the conventional masked-residue trajectory and the
    // disclosed residues isolates the mask system's output record.
    std::vector<u64> folded = output_record(sys, ct.init.masked_message(), masked_inputs(ct.inputs));
    std::vector<u64> mask_outputs(folded.size());
    for (std::size_t t = 0; t < folded.size(); ++t) mask_outputs[t] = q.sub(folded[t], residues[t]);

    EquivalentInfo eq = residue_to_equivalent_input(nf, mask_outputs, steps);
    ZqMatrix disclosed_init = matmul(nf.from_chain, eq.v0);

    const std::size_t n = sys.dim();
    const std::size_t N = ct.init.key_dim();
    ZqMatrix init_body(n, N + 2, q);
    for (std::size_t i = 0; i < n; ++i) {
        init_body.at(i, 0) = q.sub(ct.init.body().at(i, 0), disclosed_init.at(i, 0));
        for (std::size_t j = 0; j < N; ++j) init_body.at(i, 1 + j) = ct.init.body().at(i, 1 + j);
        init_body.at(i, N + 1) = disclosed_init.at(i, 0);
    }
    ModifiedTranscript mt{Ciphertext(std::move(init_body), CtKind::Modified), {}};
    mt.inputs.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        const u64 disclosed = eq.shifted_inputs[t];
        ZqMatrix row(1, N + 2, q);
        row.at(0, 0) = q.sub(ct.inputs[t].body().at(0, 0), disclosed);
        for (std::size_t j = 0; j < N; ++j) row.at(0, 1 + j) = ct.inputs[t].body().at(0, 1 + j);
        row.at(0, N + 1) = disclosed;
        mt.inputs.emplace_back(std::move(row), CtKind::Modified);
    }
    return mt;
}

} // namespace rdlwe
