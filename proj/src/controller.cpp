#include "rdlwe/controller.hpp"

#include <cmath>

#include "rdlwe/errors.hpp"

namespace rdlwe {

namespace {

std::size_t svd_rank(const Eigen::MatrixXd& m, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    return rank;
}

Eigen::MatrixXd observability_matrix(const Eigen::MatrixXd& a, const Eigen::RowVectorXd& c) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd obs(n, n);
    Eigen::RowVectorXd row = c;
    for (Eigen::Index i = 0; i < n; ++i) {
        obs.row(i) = row;
        row = row * a;
    }
    return obs;
}

} // namespace

double closed_loop_spectral_radius(const PlantModel& plant, const ObserverController& ctrl) {
    const Eigen::Index n = plant.A.rows();
    Eigen::MatrixXd loop(2 * n, 2 * n);
    loop.topLeftCorner(n, n) = plant.A;
    loop.topRightCorner(n, n) = plant.B * ctrl.K;
    loop.bottomLeftCorner(n, n) = ctrl.L * plant.C;
    loop.bottomRightCorner(n, n) = plant.A + plant.B * ctrl.K - ctrl.L * plant.C;
    return loop.eigenvalues().cwiseAbs().maxCoeff();
}

void validate_loop(const PlantModel& plant, const ObserverController& ctrl) {
    const Eigen::Index n = plant.A.rows();
    if (plant.A.cols() != n || plant.B.size() != n || plant.C.size() != n ||
        plant.x0.size() != n || ctrl.K.size() != n || ctrl.L.size() != n ||
        ctrl.xhat0.size() != n)
        throw ConfigError("plant/controller dimensions are inconsistent");

    Eigen::MatrixXd ctrb(n, n);
    Eigen::VectorXd col = plant.B;
    for (Eigen::Index i = 0; i < n; ++i) {
        ctrb.col(i) = col;
        col = plant.A * col;
    }
    const double tol = 1e-8;
    if (svd_rank(ctrb, tol) != static_cast<std::size_t>(n))
        throw ConfigError("(A, B) is not controllable");
    if (svd_rank(observability_matrix(plant.A, plant.C), tol) != static_cast<std::size_t>(n))
        throw ConfigError("(A, C) is not observable");
    if (closed_loop_spectral_radius(plant, ctrl) >= 1.0)
        throw ConfigError("closed loop of plant and controller is not stable");
}

IntegerRealization integerize(const PlantModel& plant, const ObserverController& ctrl,
                              const std::vector<long long>& target_charpoly) {
    const Eigen::Index n = plant.A.rows();
    if (target_charpoly.size() != static_cast<std::size_t>(n))
        throw ConfigError("target characteristic polynomial needs n coefficients");

    const Eigen::MatrixXd closed = plant.A + plant.B * ctrl.K; // A + BK
    Eigen::MatrixXd obs = observability_matrix(closed, plant.C);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(obs, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues().minCoeff() <= 1e-8)
        throw ObservabilityFailure("(A + BK, C) observability matrix is rank-deficient");

    // Observer canonical coordinates: columns v_j = (A+BK)^{n-j} v_n with
    // obs * v_n = e_n, so C maps to e_1 and the state matrix becomes a
    // left-column companion form.
    Eigen::VectorXd en = Eigen::VectorXd::Zero(n);
    en(n - 1) = 1.0;
    Eigen::VectorXd vn = obs.fullPivLu().solve(en);
    Eigen::MatrixXd v(n, n);
    Eigen::VectorXd cur = vn;
    for (Eigen::Index j = n; j >= 1; --j) {
        v.col(j - 1) = cur;
        cur = closed * cur;
    }
    Eigen::MatrixXd t = v.fullPivLu().inverse();

    const Eigen::MatrixXd base = closed - ctrl.L * plant.C; // A + BK - LC
    Eigen::MatrixXd companion = t * base * v;

    // Shift the first column to the integer target coefficients.
    Eigen::VectorXd target_col(n);
    for (Eigen::Index k = 0; k < n; ++k)
        target_col(k) = -static_cast<double>(target_charpoly[static_cast<std::size_t>(n - 1 - k)]);
    Eigen::VectorXd w = target_col - companion.col(0);
    Eigen::VectorXd residue_gain = v * w;

    Eigen::MatrixXd exact = companion;
    exact.col(0) = target_col;
    Eigen::MatrixXd rounded = exact.array().round().matrix();
    if ((exact - rounded).cwiseAbs().maxCoeff() >= 1e-9)
        throw Error("integerization residual exceeds tolerance");

    return IntegerRealization{std::move(t), std::move(v), std::move(residue_gain),
                              std::move(rounded)};
}

i64 round_div_away(i128 num, i128 den) {
    const bool neg = num < 0;
    i128 a = neg ? -num : num;
    i128 r = (2 * a + den) / (2 * den);
    return static_cast<i64>(neg ? -r : r);
}

namespace {

// round(x) mod q with the half-away rule; throws when |round(x)| >= q/2.
u64 quantize_entry(double x, Modulus q, const char* what) {
    if (!std::isfinite(x)) throw NonFinite(std::string(what) + " is not finite");
    const double rounded = std::round(std::abs(x)); // std::round is half away from zero
    if (2.0 * rounded >= static_cast<double>(q.value()))
        throw ModulusTooSmall(std::string(what) + " magnitude " + std::to_string(rounded) +
                              " reaches q/2");
    const i64 value = std::llround(x);
    return q.reduce(value);
}

ZqMatrix quantize_matrix(const Eigen::MatrixXd& m, Modulus q, const char* what) {
    ZqMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), q);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
                quantize_entry(m(r, c), q, what);
    return out;
}

} // namespace

ScaledParams scale_params(const IntegerRealization& ir, const ObserverController& ctrl,
                          const PlantModel& plant, const Scaling& scaling, Modulus q) {
    if (scaling.step <= 0 || scaling.param_den < 1 || scaling.msg_den < 1)
        throw ConfigError("scaling parameters must be positive with integer denominators");
    const double s = 1.0 / static_cast<double>(scaling.param_den);

    const u64 j_int = scaling.param_den * scaling.param_den; // 1/s^2
    if (2 * j_int >= q.value()) throw ModulusTooSmall("1/s^2 reaches q/2");

    ZqMatrix f = quantize_matrix(ir.state_int, q, "state matrix entry");
    ZqMatrix g = quantize_matrix((ir.coord_map * (ctrl.L - ir.residue_gain)) / s, q,
                                 "input gain entry");
    ZqMatrix h = quantize_matrix((-plant.C * ir.coord_map_inv) / s, q, "output row entry");
    ZqMatrix rg = quantize_matrix((ir.coord_map * ir.residue_gain) / s, q,
                                  "residue gain entry");
    ZqMatrix p = quantize_matrix((ctrl.K * ir.coord_map_inv) / s, q, "gain row entry");
    return ScaledParams{std::move(f), std::move(g), std::move(h), std::move(rg), std::move(p),
                        q.reduce(static_cast<i64>(j_int)), scaling};
}

ZqMatrix quantize_initial_state(const Eigen::VectorXd& xhat0, const IntegerRealization& ir,
                                const Scaling& scaling, Modulus q) {
    const Eigen::VectorXd mapped = ir.coord_map * xhat0;
    const double rs = scaling.step / static_cast<double>(scaling.param_den);
    ZqMatrix out(static_cast<std::size_t>(mapped.size()), 1, q);
    for (Eigen::Index i = 0; i < mapped.size(); ++i) {
        const double scaled = mapped(i) / rs;
        if (!std::isfinite(scaled)) throw NonFinite("quantized initial state");
        if (std::abs(scaled) >= 4.0e18)
            throw ModulusTooSmall("quantized initial state exceeds the integer range");
        const i128 value = static_cast<i128>(std::llround(scaled)) *
                           static_cast<i128>(scaling.msg_den);
        const i128 bound = static_cast<i128>(q.value()) / 2;
        if (value >= bound || value <= -bound)
            throw ModulusTooSmall("quantized initial state reaches q/2");
        out.at(static_cast<std::size_t>(i), 0) = q.reduce(value);
    }
    return out;
}

u64 quantize_measurement(double y, const Scaling& scaling, Modulus q) {
    const double scaled = y / scaling.step;
    if (!std::isfinite(scaled)) throw NonFinite("quantized measurement");
    if (std::abs(scaled) >= 4.0e18)
        throw ModulusTooSmall("quantized measurement exceeds the integer range");
    const i128 value = static_cast<i128>(std::llround(scaled)) * static_cast<i128>(scaling.msg_den);
    const i128 bound = static_cast<i128>(q.value()) / 2;
    if (value >= bound || value <= -bound)
        throw ModulusTooSmall("quantized measurement reaches q/2");
    return q.reduce(value);
}

namespace {

double restore_scale(const Scaling& scaling) {
    // L * r * s^2
    return scaling.step / (static_cast<double>(scaling.msg_den) *
                           static_cast<double>(scaling.param_den) *
                           static_cast<double>(scaling.param_den));
}

} // namespace

double restore_residue(u64 v, const Scaling& scaling, Modulus q) {
    return restore_scale(scaling) * static_cast<double>(q.centered(v));
}

double restore_input(u64 v, const Scaling& scaling, Modulus q) {
    return restore_scale(scaling) * static_cast<double>(q.centered(v));
}

Ciphertext residue_feedback_ciphertext(u64 r1, const Scaling& scaling, Modulus q,
                                       std::size_t width) {
    if (width < 3) throw WidthMismatch("feedback row width must be at least 3");
    // round(s^2 * centered(r1)) with s^2 = 1 / param_den^2, exactly in integers.
    const i128 den = static_cast<i128>(scaling.param_den) * scaling.param_den;
    const i64 value = round_div_away(q.centered(r1), den);
    ZqMatrix row(1, width, q);
    row.at(0, 0) = q.reduce(value);
    return Ciphertext(std::move(row), CtKind::Modified);
}

double premodulo_bound(const PlantModel& plant, const ObserverController& ctrl,
                       const IntegerRealization& ir, const Scaling& scaling,
                       std::size_t horizon, double safety, std::string* dominant) {
    // Simulate the unencrypted loop and track the largest magnitude any
    // scaled integer signal reaches: the transformed state T xh / (L r s),
    // the output K xh / (L r s^2) and the residue r / (L r s^2).
    Eigen::VectorXd x = plant.x0;
    Eigen::VectorXd xh = ctrl.xhat0;
    const double lrs = scaling.step / (static_cast<double>(scaling.msg_den) *
                                       static_cast<double>(scaling.param_den));
    const double lrs2 = lrs / static_cast<double>(scaling.param_den);
    double bound = 0;
    const char* which = "controller state";
    auto track = [&](double value, const char* name) {
        if (value > bound) {
            bound = value;
            which = name;
        }
    };
    for (std::size_t t = 0; t < horizon; ++t) {
        const double y = plant.C * x;
        const double u = ctrl.K * xh;
        const double res = y - plant.C * xh;
        const Eigen::VectorXd mapped = ir.coord_map * xh;
        track(mapped.cwiseAbs().maxCoeff() / lrs, "scaled controller state");
        track(std::abs(u) / lrs2, "scaled controller output");
        track(std::abs(res) / lrs2, "scaled residue");
        track(std::abs(y) * static_cast<double>(scaling.msg_den) / scaling.step,
              "quantized measurement");
        xh = (plant.A + plant.B * ctrl.K - ctrl.L * plant.C) * xh + ctrl.L * y;
        x = plant.A * x + plant.B * u;
        if (x.cwiseAbs().maxCoeff() > 1e12) throw NonFinite("plant state during sizing run");
    }
    if (dominant != nullptr) *dominant = which;
    return bound * safety;
}

} // namespace rdlwe
