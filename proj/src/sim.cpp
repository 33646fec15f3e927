#include "rdlwe/sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "rdlwe/errors.hpp"

namespace rdlwe {

std::pair<Eigen::VectorXd, double> step_plant(const PlantModel& plant, const Eigen::VectorXd& x,
                                              double u) {
    const double y = plant.C * x;
    Eigen::VectorXd next = plant.A * x + plant.B * u;
    if (!next.allFinite() || next.cwiseAbs().maxCoeff() > 1e12)
        throw NonFinite("plant state beyond 1e12");
    return {std::move(next), y};
}

RefCtrlOut step_reference_controller(const PlantModel& plant, const ObserverController& ctrl,
                                     const Eigen::VectorXd& xhat, double y) {
    const double u = ctrl.K * xhat;
    const double residue = y - plant.C * xhat;
    Eigen::VectorXd next =
        (plant.A + plant.B * ctrl.K - ctrl.L * plant.C) * xhat + ctrl.L * y;
    return RefCtrlOut{std::move(next), u, residue};
}

Ciphertext residue_row(const Ciphertext& state, const Ciphertext& measurement,
                       const ScaledParams& params) {
    Ciphertext res = hom_matmul(params.H, state);
    res.body() += measurement.body().scaled(params.J);
    return res;
}

EncCtrlOut step_encrypted_controller(const Ciphertext& state, const Ciphertext& measurement,
                                     const Ciphertext& feedback, const ScaledParams& params) {
    if (state.width() != measurement.width() || state.width() != feedback.width())
        throw DimensionMismatch("ciphertext widths differ across controller inputs");
    if (state.rows() != params.dim() || measurement.rows() != 1 || feedback.rows() != 1)
        throw DimensionMismatch("controller ciphertext row counts");

    Ciphertext residue = residue_row(state, measurement, params);
    Ciphertext output = hom_matmul(params.P, state);
    Ciphertext next = hom_matmul(params.F, state);
    next += hom_matmul(params.G, measurement);
    next += hom_matmul(params.R, feedback);
    return EncCtrlOut{std::move(next), std::move(output), std::move(residue)};
}

bool detect(double r_restored, double threshold) { return std::abs(r_restored) > threshold; }

Ciphertext inject_attack(const Ciphertext& ct, const ZqMatrix& delta) {
    if (delta.rows() != ct.rows() || delta.cols() != 1)
        throw DimensionMismatch("attack vector must match the ciphertext rows");
    ZqMatrix trivial(ct.rows(), ct.width(), ct.mod());
    for (std::size_t i = 0; i < ct.rows(); ++i) trivial.at(i, 0) = delta.at(i, 0);
    Ciphertext forged = ct;
    forged += Ciphertext(std::move(trivial), ct.kind());
    return forged;
}

SystemZq controller_system(const ScaledParams& params) {
    return SystemZq(params.F, params.G, params.H, params.J);
}

double calibrate_threshold(const ScenarioConfig& cfg) {
    Eigen::VectorXd x = cfg.plant.x0;
    Eigen::VectorXd xh = cfg.ctrl.xhat0;
    double peak = 0;
    for (std::size_t t = 0; t < cfg.horizon; ++t) {
        const double y = cfg.plant.C * x;
        RefCtrlOut ref = step_reference_controller(cfg.plant, cfg.ctrl, xh, y);
        peak = std::max(peak, std::abs(ref.residue));
        auto [next, y_read] = step_plant(cfg.plant, x, ref.u);
        (void)y_read;
        x = std::move(next);
        xh = std::move(ref.state);
    }
    return 5.0 * peak;
}

SimTrace run_scenario(const ScenarioConfig& cfg) {
    if (cfg.horizon < 1) throw ConfigError("horizon must be at least 1");
    if (cfg.threshold < 0) throw ConfigError("threshold must be non-negative");
    validate_loop(cfg.plant, cfg.ctrl);

    Modulus q(cfg.crypto.q);
    IntegerRealization ir = integerize(cfg.plant, cfg.ctrl, cfg.target_charpoly);
    std::string dominant;
    const double bound =
        premodulo_bound(cfg.plant, cfg.ctrl, ir, cfg.scaling, cfg.horizon, 4.0, &dominant);
    if (static_cast<double>(q.value()) <= 2.0 * bound)
        throw ModulusTooSmall("sizing heuristic needs q > " + std::to_string(2.0 * bound) +
                              "; the " + dominant + " sets the bound");
    ScaledParams params = scale_params(ir, cfg.ctrl, cfg.plant, cfg.scaling, q);

    RngStream rng(cfg.crypto.seed);
    SecretKey sk = keygen(cfg.crypto.key_dim, q, cfg.crypto.sigma, rng);
    EncryptorSession session(sk, controller_system(params), std::move(rng));

    ZqMatrix x0 = quantize_initial_state(cfg.ctrl.xhat0, ir, cfg.scaling, q);
    Ciphertext state = session.encrypt_initial_state(x0);
    const std::size_t width = state.width();

    Eigen::VectorXd plant_enc = cfg.plant.x0;
    Eigen::VectorXd plant_ref = cfg.plant.x0;
    Eigen::VectorXd xhat_ref = cfg.ctrl.xhat0;

    // Pre-attack measurement ciphertext kept for the replay attack.
    std::optional<Ciphertext> replay_ct;
    double replay_y = 0;

    SimTrace trace;
    trace.records.reserve(cfg.horizon);

    for (std::size_t t = 0; t < cfg.horizon; ++t) {
        const bool attacking =
            cfg.attack.type != AttackType::None && t >= cfg.attack.start && t < cfg.attack.stop;

        const double y_enc = cfg.plant.C * plant_enc;
        const double y_ref = cfg.plant.C * plant_ref;

        Ciphertext meas = session.encrypt_input(quantize_measurement(y_enc, cfg.scaling, q));
        double y_ref_seen = y_ref;

        if (cfg.attack.type == AttackType::MeasurementReplay && !attacking) {
            replay_ct = meas;
            replay_y = y_ref;
        }
        if (attacking) {
            switch (cfg.attack.type) {
                case AttackType::MeasurementBias: {
                    ZqMatrix delta(1, 1, q);
                    delta.at(0, 0) = quantize_measurement(cfg.attack.magnitude, cfg.scaling, q);
                    meas = inject_attack(meas, delta);
                    y_ref_seen = y_ref + cfg.attack.magnitude;
                    break;
                }
                case AttackType::MeasurementReplay: {
                    if (replay_ct) {
                        meas = *replay_ct;
                        y_ref_seen = replay_y;
                    }
                    break;
                }
                default:
                    break;
            }
        }

        Ciphertext res = residue_row(state, meas, params);
        const u64 r1 = disclosed_residue(res);
        const double r_disclosed = restore_residue(r1, cfg.scaling, q);
        const bool alarm = detect(r_disclosed, cfg.threshold);

        Ciphertext feedback = residue_feedback_ciphertext(r1, cfg.scaling, q, width);
        EncCtrlOut out = step_encrypted_controller(state, meas, feedback, params);
        state = std::move(out.state);

        Ciphertext uct = std::move(out.output);
        if (attacking && cfg.attack.type == AttackType::OutputBias) {
            ZqMatrix delta(1, 1, q);
            const double lrs2 = cfg.scaling.step / (static_cast<double>(cfg.scaling.msg_den) *
                                                    static_cast<double>(cfg.scaling.param_den) *
                                                    static_cast<double>(cfg.scaling.param_den));
            const double forged = cfg.attack.magnitude / lrs2;
            if (std::abs(forged) >= 4.0e18)
                throw ModulusTooSmall("forged actuation exceeds the integer range");
            delta.at(0, 0) = q.reduce(static_cast<i64>(std::llround(forged)));
            uct = inject_attack(uct, delta);
        }
        const double u_enc = restore_input(decrypt_mod(uct, sk).at(0, 0), cfg.scaling, q);

        RefCtrlOut ref = step_reference_controller(cfg.plant, cfg.ctrl, xhat_ref, y_ref_seen);
        xhat_ref = std::move(ref.state);
        double u_ref = ref.u;
        if (attacking && cfg.attack.type == AttackType::OutputBias) u_ref += cfg.attack.magnitude;

        if (std::abs(u_enc) > cfg.signal_bound || std::abs(r_disclosed) > cfg.signal_bound)
            throw ModulusTooSmall("restored signal exceeded the configured bound; "
                                  "scaled values may have wrapped");

        auto [next_enc, ye] = step_plant(cfg.plant, plant_enc, u_enc);
        auto [next_ref, yr] = step_plant(cfg.plant, plant_ref, u_ref);
        (void)ye;
        (void)yr;
        plant_enc = std::move(next_enc);
        plant_ref = std::move(next_ref);

        trace.records.push_back(
            SimRecord{t, y_enc, u_enc, u_ref, r_disclosed, ref.residue, alarm, attacking});
        trace.max_residue_gap = std::max(trace.max_residue_gap, std::abs(ref.residue - r_disclosed));
        trace.max_input_gap = std::max(trace.max_input_gap, std::abs(u_ref - u_enc));
        if (alarm) {
            ++trace.alarm_count;
            if (trace.first_alarm == SIZE_MAX) trace.first_alarm = t;
        }
    }
    return trace;
}

ResidueObservability residue_observability(const PlantModel& plant,
                                           const ObserverController& ctrl) {
    const Eigen::Index n = plant.A.rows();
    Eigen::MatrixXd loop(2 * n, 2 * n);
    loop.topLeftCorner(n, n) = plant.A;
    loop.topRightCorner(n, n) = plant.B * ctrl.K;
    loop.bottomLeftCorner(n, n) = ctrl.L * plant.C;
    loop.bottomRightCorner(n, n) = plant.A + plant.B * ctrl.K - ctrl.L * plant.C;
    Eigen::RowVectorXd out(2 * n);
    out << plant.C, -plant.C;

    auto rank_of = [](const Eigen::MatrixXd& a, const Eigen::RowVectorXd& c) {
        Eigen::MatrixXd obs(a.rows(), a.cols());
        Eigen::RowVectorXd row = c;
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            obs.row(i) = row;
            row = row * a;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(obs);
        std::size_t rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-8) ++rank;
        return rank;
    };

    // x - xh evolves by A - LC and drives the residue through C.
    Eigen::MatrixXd err = plant.A - ctrl.L * plant.C;
    return ResidueObservability{rank_of(loop, out), static_cast<std::size_t>(2 * n),
                                rank_of(err, plant.C), static_cast<std::size_t>(n)};
}

void write_csv(const SimTrace& trace, std::ostream& out) {
    out << "t,y,u_enc,u_ref,r_disclosed,r_ref,alarm,attack_active\n";
    char buf[512];
    for (const auto& rec : trace.records) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n", rec.t, rec.y,
                      rec.u_enc, rec.u_ref, rec.r_disclosed, rec.r_ref, rec.alarm ? 1 : 0,
                      rec.attack_active ? 1 : 0);
        out << buf;
    }
}

void write_csv_file(const SimTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    write_csv(trace, out);
}

} // namespace rdlwe
