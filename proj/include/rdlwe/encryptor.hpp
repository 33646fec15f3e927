#pragma once

#include <utility>
#include <vector>

#include "rdlwe/lwe.hpp"
#include "rdlwe/zero_dynamics.hpp"

namespace rdlwe {

/// Residue-disclosing encryptor for one system run.
///
/// The session samples the initial-state mask once, then drives the
/// internal zero-dynamics generator
///     z(t+1) = zd_update * z(t),   z(0) = to_zd * mask
/// whose read-out g^{-1} * head_from_zd * z(t) shifts each input mask into
/// its disclosed part.  Encrypting with those disclosed parts split into a
/// separate last column makes the masks' contribution to the residue
/// identically zero, so the first element of the encrypted residue row
/// equals the plaintext residue -- no key needed to read it.
///
/// Single-owner, mutated sequentially; emitted ciphertexts are immutable.
class EncryptorSession {
public:
    /// Samples the initial-state randomness from `rng` (which the session
    /// takes over for all later draws).
    EncryptorSession(SecretKey sk, const SystemZq& sys, RngStream rng);
    /// Test hook: pin the initial-state randomness explicitly.
    EncryptorSession(SecretKey sk, const SystemZq& sys, RngStream rng, LweRandomness init_rand);

    /// Modified encryption of the initial state, width N+2:
    /// [x0 + mask - disclosed, random block, disclosed].  Allowed once,
    /// before any input encryption.
    Ciphertext encrypt_initial_state(const ZqMatrix& x0);

    /// Modified encryption of one input, width N+2; advances the masking
    /// generator and the step counter.
    Ciphertext encrypt_input(u64 y);
    Ciphertext encrypt_input_with(u64 y, const LweRandomness& rand);

    /// The next `count` masking-generator read-outs (the message-independent
    /// part of each disclosed input column), without advancing the session.
    /// This is the sequence an offline pass would precompute.
    std::vector<u64> preview_masking_shifts(std::size_t count) const;

    const NormalForm& nf() const { return nf_; }
    const SecretKey& secret_key() const { return sk_; }
    u64 step() const { return step_; }
    const ZqMatrix& init_mask() const { return init_mask_; }
    const ZqMatrix& disclosed_init() const { return disclosed_init_; }
    const ZqMatrix& zd_state() const { return zd_state_; }

private:
    void seed_masking(LweRandomness init_rand);

    SecretKey sk_;
    NormalForm nf_;
    GaussianSampler noise_;
    RngStream rng_;
    ZqMatrix init_rand_;      // n x N random block of the initial state
    ZqMatrix init_mask_;      // mask = A*sk + e for the initial state
    ZqMatrix disclosed_init_; // from_chain * to_chain * mask
    ZqMatrix zd_state_;       // masking generator state
    u64 step_ = 0;
    bool init_done_ = false;
    bool inputs_started_ = false;
};

/// Modified decryption: body * [1, -sk^T, 1]^T mod q (width N+2).
ZqMatrix decrypt_mod(const Ciphertext& c, const SecretKey& sk);

/// First element of the encrypted residue row: the disclosed residue.
u64 disclosed_residue(const Ciphertext& residue_row);

/// One session's worth of modified ciphertexts.
struct ModifiedTranscript {
    Ciphertext init;                // n x (N+2)
    std::vector<Ciphertext> inputs; // 1 x (N+2) each
};

/// The same information re-encoded: conventional ciphertexts plus the
/// residue record they disclose.
struct ConventionalTranscript {
    Ciphertext init;                // n x (N+1)
    std::vector<Ciphertext> inputs; // 1 x (N+1) each
};

/// Fold the disclosed columns back into the message columns and read the
/// residue record off the masked messages (length T + nu).
std::pair<ConventionalTranscript, std::vector<u64>>
transcript_to_conventional(const ModifiedTranscript& mt, const SystemZq& sys);

/// Rebuild the modified transcript from the conventional one and the
/// residue record, by inverting the masked-residue trajectory.  The two
/// directions are mutually inverse bijections.
ModifiedTranscript transcript_to_modified(const ConventionalTranscript& ct,
                                          const std::vector<u64>& residues, const SystemZq& sys);

} // namespace rdlwe
