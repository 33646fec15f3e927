#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rdlwe/lwe.hpp"
#include "rdlwe/matrix.hpp"

namespace rdlwe {

/// Discrete-time SISO plant x+ = Ax + Bu, y = Cx.
struct PlantModel {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    Eigen::VectorXd x0;

    std::size_t dim() const { return static_cast<std::size_t>(A.rows()); }
};

/// Observer-based stabilizing controller
///   xh+ = (A + BK - LC) xh + L y,   u = K xh,   r = y - C xh.
struct ObserverController {
    Eigen::RowVectorXd K;
    Eigen::VectorXd L;
    Eigen::VectorXd xhat0;
};

/// Structural checks: (A,B) controllable, (A,C) observable, closed loop
/// stable.  Throws ConfigError with the failed property named.
void validate_loop(const PlantModel& plant, const ObserverController& ctrl);

/// Spectral radius of the 2n-dimensional closed loop of plant+controller.
double closed_loop_spectral_radius(const PlantModel& plant, const ObserverController& ctrl);

/// Change of coordinates T and residue feedback gain R making the
/// controller state matrix A + BK - LC + RC integer in the new
/// coordinates.  T puts (A+BK, C) into observer canonical form; R places
/// the characteristic polynomial at the integer target.
struct IntegerRealization {
    Eigen::MatrixXd coord_map;     // T
    Eigen::MatrixXd coord_map_inv; // T^{-1}
    Eigen::VectorXd residue_gain;  // R
    Eigen::MatrixXd state_int;     // rounded integer T (A+BK-LC+RC) T^{-1}
};

/// `target_charpoly` holds the integer coefficients c_0..c_{n-1} of
/// lambda^n + c_{n-1} lambda^{n-1} + ... + c_0.  All zeros (the default
/// deadbeat target) give a nilpotent companion state matrix.
IntegerRealization integerize(const PlantModel& plant, const ObserverController& ctrl,
                              const std::vector<long long>& target_charpoly);

/// Scaling knobs: quantization step r, and the integer denominators of the
/// parameter scale s = 1/param_den and message scale L = 1/msg_den.
struct Scaling {
    double step;   // r > 0
    u64 param_den; // 1/s
    u64 msg_den;   // 1/L
};

/// The controller mapped into Z_q:
///   x+ = F x + G y + R rfb,  u = P x,  r = H x + J y.
struct ScaledParams {
    ZqMatrix F; // n x n integer state matrix mod q
    ZqMatrix G; // n x 1
    ZqMatrix H; // 1 x n
    ZqMatrix R; // n x 1 residue feedback gain
    ZqMatrix P; // 1 x n output gain
    u64 J;      // 1/s^2 mod q
    Scaling scaling;

    const Modulus& mod() const { return F.mod(); }
    std::size_t dim() const { return F.rows(); }
};

ScaledParams scale_params(const IntegerRealization& ir, const ObserverController& ctrl,
                          const PlantModel& plant, const Scaling& scaling, Modulus q);

/// msg_den * round(T xhat0 / (r s)) mod q, entrywise.
ZqMatrix quantize_initial_state(const Eigen::VectorXd& xhat0, const IntegerRealization& ir,
                                const Scaling& scaling, Modulus q);

/// msg_den * round(y / r) mod q.
u64 quantize_measurement(double y, const Scaling& scaling, Modulus q);

/// L r s^2 * centered(v): the real-valued residue, no key involved.
double restore_residue(u64 v, const Scaling& scaling, Modulus q);

/// Same scaling applied to a decrypted controller output.
double restore_input(u64 v, const Scaling& scaling, Modulus q);

/// The residue feedback row [round(s^2 * centered(r1)) mod q, 0, ..., 0]
/// of the given total width (a trivial encryption: zero random block and
/// zero disclosed column).
Ciphertext residue_feedback_ciphertext(u64 r1, const Scaling& scaling, Modulus q,
                                       std::size_t width);

/// Exact round-half-away-from-zero of num/den (den > 0).
i64 round_div_away(i128 num, i128 den);

/// Worst-case pre-modulo magnitude of the scaled controller signals,
/// estimated by simulating the unencrypted loop; the modulus must exceed
/// twice this bound times the given safety factor.  When `dominant` is
/// given it receives the name of the signal that set the bound.
double premodulo_bound(const PlantModel& plant, const ObserverController& ctrl,
                       const IntegerRealization& ir, const Scaling& scaling,
                       std::size_t horizon, double safety, std::string* dominant = nullptr);

} // namespace rdlwe
