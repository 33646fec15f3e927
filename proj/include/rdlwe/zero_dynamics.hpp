#pragma once

#include <optional>
#include <vector>

#include "rdlwe/matrix.hpp"

namespace rdlwe {

/// SISO linear system over Z_q:
///   x(t+1) = F x(t) + G y(t),   r(t) = H x(t) + J y(t)   (all mod q).
struct SystemZq {
    ZqMatrix F; // n x n
    ZqMatrix G; // n x 1
    ZqMatrix H; // 1 x n
    u64 J;      // direct feedthrough

    SystemZq(ZqMatrix f, ZqMatrix g, ZqMatrix h, u64 j);

    std::size_t dim() const { return F.rows(); }
    const Modulus& mod() const { return F.mod(); }
};

/// One state update; returns the output at the pre-update state.
u64 system_step(const SystemZq& sys, ZqMatrix& state, u64 input);

/// Output sequence of the system from x0 under the given inputs.
std::vector<u64> simulate_outputs(const SystemZq& sys, const ZqMatrix& x0,
                                  const std::vector<u64>& inputs);

/// Relative degree: 0 if J != 0, otherwise the smallest d >= 1 with
/// H F^{d-1} G != 0 mod q.  Throws NoRelativeDegree when the output never
/// depends on the input.
std::size_t relative_degree(const SystemZq& sys);

/// Coordinates splitting the state into an internal (zero-dynamics) part z
/// and an output chain v:
///   z(t+1)      = zd_update * z + zd_drive * v
///   v_i(t+1)    = v_{i+1}                       (i < nu)
///   v_nu(t+1)   = head_from_zd * z + head_from_chain * v + input_gain * y
///   r(t)        = v_1
/// with [z; v] = [to_zd; to_chain] * x and inverse [from_zd, from_chain].
/// For nu = 0 the fields hold the equivalent-input generator instead:
/// to_zd = I, zd_update = F - G J^{-1} H, head_from_zd = H, input_gain = J,
/// and the chain blocks are empty.
struct NormalForm {
    std::size_t nu;
    ZqMatrix to_zd;           // (n-nu) x n
    ZqMatrix to_chain;        // nu x n
    ZqMatrix from_zd;         // n x (n-nu)
    ZqMatrix from_chain;      // n x nu
    ZqMatrix zd_update;       // (n-nu) x (n-nu)
    ZqMatrix zd_drive;        // (n-nu) x nu
    ZqMatrix head_from_zd;    // 1 x (n-nu)
    ZqMatrix head_from_chain; // 1 x nu
    u64 input_gain;           // nonzero
    SystemZq sys;             // the source system

    std::size_t dim() const { return sys.dim(); }
    const Modulus& mod() const { return sys.mod(); }
};

/// Build the transform for the given system.  The internal rows complete
/// {H F^i : i <= nu-2} to a basis of the left kernel of G, taken in the
/// deterministic order produced by elimination, so the construction (and
/// everything disclosed downstream) is reproducible.
NormalForm build_transform(const SystemZq& sys);

/// One step of the transformed dynamics (nu >= 1).  Returns the updated
/// (z, v) and the output r = v_1 at the pre-update state.
struct NormalFormStep {
    ZqMatrix z_next;
    ZqMatrix v_next;
    u64 output;
};
NormalFormStep normal_form_step(const NormalForm& nf, const ZqMatrix& z, const ZqMatrix& v,
                                u64 input);

/// The unique input sequence keeping the output identically zero from x0;
/// requires to_chain * x0 = 0 (throws NonzeroInitialOutput otherwise).
/// y(t) = -g^{-1} * head_from_zd * zd_update^t * to_zd * x0.
u64 zero_output_input(const NormalForm& nf, const ZqMatrix& x0, u64 t);

/// The information equivalent to the output trajectory: the chain part of
/// the initial state and the shifted input sequence
///   y'(t) = y(t) + g^{-1} * head_from_zd * zd_update^t * to_zd * x0,
/// satisfying S(x0, y) = S(from_chain * v0, y') at every step.
struct EquivalentInfo {
    ZqMatrix v0;                  // nu x 1 (empty when nu = 0)
    std::vector<u64> shifted_inputs;
};
EquivalentInfo equivalent_info(const NormalForm& nf, const ZqMatrix& x0,
                               const std::vector<u64>& inputs);

/// Recover the equivalent information from the output sequence alone.
/// Needs outputs through index t + nu to produce y'(t); throws
/// InsufficientHistory otherwise.  `count` limits how many inputs to
/// recover (default: as many as the history allows).
EquivalentInfo residue_to_equivalent_input(const NormalForm& nf, const std::vector<u64>& outputs,
                                           std::optional<std::size_t> count = std::nullopt);

/// Output record of length steps + nu: the outputs under the given inputs,
/// extended past the horizon by the relative-degree window, which later
/// inputs cannot influence.  Exactly the history the inversion needs.
std::vector<u64> output_record(const SystemZq& sys, const ZqMatrix& x0,
                               const std::vector<u64>& inputs);

} // namespace rdlwe
