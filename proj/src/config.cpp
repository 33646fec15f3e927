#include "rdlwe/config.hpp"

#include <fstream>

#include "rdlwe/errors.hpp"

namespace rdlwe {

using nlohmann::json;

namespace {

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

Eigen::MatrixXd matrix_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ConfigError(what + " must be an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ConfigError(what + " rows have inconsistent lengths");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

Eigen::VectorXd vector_from(const json& j, const std::string& what) {
    if (!j.is_array()) throw ConfigError(what + " must be an array");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

json matrix_to(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json zq_to(const ZqMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

ZqMatrix zq_from(const json& j, Modulus q, const std::string& what) {
    if (!j.is_array()) throw ConfigError(what + " must be an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = rows == 0 ? 0 : j[0].size();
    ZqMatrix m(rows, cols, q);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) throw ConfigError(what + " rows have inconsistent lengths");
        for (std::size_t c = 0; c < cols; ++c) {
            u64 v = j[r][c].get<u64>();
            if (v >= q.value()) throw ConfigError(what + " entry out of range");
            m.at(r, c) = v;
        }
    }
    return m;
}

AttackType attack_type_from(const std::string& s) {
    if (s == "none") return AttackType::None;
    if (s == "measurement_bias") return AttackType::MeasurementBias;
    if (s == "measurement_replay") return AttackType::MeasurementReplay;
    if (s == "output_bias") return AttackType::OutputBias;
    throw ConfigError("unknown attack type: " + s);
}

std::string attack_type_to(AttackType t) {
    switch (t) {
        case AttackType::None: return "none";
        case AttackType::MeasurementBias: return "measurement_bias";
        case AttackType::MeasurementReplay: return "measurement_replay";
        case AttackType::OutputBias: return "output_bias";
    }
    return "none";
}

} // namespace

ScenarioConfig scenario_from_json(const json& j) {
    try {
        ScenarioConfig cfg;
        const json& plant = j.at("plant");
        cfg.plant.A = matrix_from(plant.at("A"), "plant.A");
        cfg.plant.B = vector_from(plant.at("B"), "plant.B");
        cfg.plant.C = vector_from(plant.at("C"), "plant.C").transpose();
        cfg.plant.x0 = vector_from(plant.at("x0"), "plant.x0");

        const json& ctrl = j.at("controller");
        cfg.ctrl.K = vector_from(ctrl.at("K"), "controller.K").transpose();
        cfg.ctrl.L = vector_from(ctrl.at("L"), "controller.L");
        cfg.ctrl.xhat0 = vector_from(ctrl.at("xhat0"), "controller.xhat0");

        const json& sc = j.at("scaling");
        cfg.scaling.step = sc.at("step").get<double>();
        cfg.scaling.param_den = sc.at("param_den").get<u64>();
        cfg.scaling.msg_den = sc.at("msg_den").get<u64>();

        cfg.target_charpoly =
            j.value("target_charpoly", std::vector<long long>(cfg.plant.dim(), 0));

        const json& crypto = j.at("crypto");
        cfg.crypto.q = crypto.at("q").get<u64>();
        cfg.crypto.key_dim = crypto.at("N").get<std::size_t>();
        cfg.crypto.sigma = crypto.at("sigma").get<double>();
        cfg.crypto.seed = crypto.value("seed", u64{1});

        const json& sim = j.at("sim");
        cfg.horizon = sim.at("horizon").get<std::size_t>();
        cfg.signal_bound = sim.value("signal_bound", 1e12);
        if (sim.contains("threshold")) {
            cfg.threshold = sim.at("threshold").get<double>();
            if (cfg.threshold < 0) throw ConfigError("sim.threshold must be non-negative");
        } else {
            cfg.threshold = calibrate_threshold(cfg);
        }

        if (j.contains("attack")) {
            const json& atk = j.at("attack");
            cfg.attack.type = attack_type_from(atk.value("type", std::string("none")));
            cfg.attack.start = atk.value("start", std::size_t{0});
            cfg.attack.stop = atk.value("stop", cfg.horizon);
            cfg.attack.magnitude = atk.value("magnitude", 0.0);
        }

        if (cfg.horizon < 1) throw ConfigError("sim.horizon must be at least 1");
        validate_loop(cfg.plant, cfg.ctrl);
        Modulus probe(cfg.crypto.q); // validates primality and range
        (void)probe;
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    } catch (const Error&) {
        throw;
    }
}

ScenarioConfig load_scenario(const std::string& path) {
    return scenario_from_json(parse_file(path));
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["plant"] = {{"A", matrix_to(cfg.plant.A)},
                  {"B", vector_to(cfg.plant.B)},
                  {"C", vector_to(cfg.plant.C.transpose())},
                  {"x0", vector_to(cfg.plant.x0)}};
    j["controller"] = {{"K", vector_to(cfg.ctrl.K.transpose())},
                       {"L", vector_to(cfg.ctrl.L)},
                       {"xhat0", vector_to(cfg.ctrl.xhat0)}};
    j["scaling"] = {{"step", cfg.scaling.step},
                    {"param_den", cfg.scaling.param_den},
                    {"msg_den", cfg.scaling.msg_den}};
    j["target_charpoly"] = cfg.target_charpoly;
    j["crypto"] = {{"q", cfg.crypto.q},
                   {"N", cfg.crypto.key_dim},
                   {"sigma", cfg.crypto.sigma},
                   {"seed", cfg.crypto.seed}};
    j["sim"] = {{"horizon", cfg.horizon},
                {"threshold", cfg.threshold},
                {"signal_bound", cfg.signal_bound}};
    j["attack"] = {{"type", attack_type_to(cfg.attack.type)},
                   {"start", cfg.attack.start},
                   {"stop", cfg.attack.stop},
                   {"magnitude", cfg.attack.magnitude}};
    return j;
}

json realization_to_json(const IntegerRealization& ir, const ScaledParams& params) {
    json j;
    j["coord_map"] = matrix_to(ir.coord_map);
    j["coord_map_inv"] = matrix_to(ir.coord_map_inv);
    j["residue_gain"] = vector_to(ir.residue_gain);
    j["state_int"] = matrix_to(ir.state_int);
    j["q"] = params.mod().value();
    j["zq"] = {{"F", zq_to(params.F)}, {"G", zq_to(params.G)}, {"H", zq_to(params.H)},
               {"R", zq_to(params.R)}, {"P", zq_to(params.P)}, {"J", params.J}};
    j["scaling"] = {{"step", params.scaling.step},
                    {"param_den", params.scaling.param_den},
                    {"msg_den", params.scaling.msg_den}};
    return j;
}

ScaledParams scaled_params_from_json(const json& j) {
    try {
        Modulus q(j.at("q").get<u64>());
        const json& zq = j.at("zq");
        Scaling scaling{j.at("scaling").at("step").get<double>(),
                        j.at("scaling").at("param_den").get<u64>(),
                        j.at("scaling").at("msg_den").get<u64>()};
        return ScaledParams{zq_from(zq.at("F"), q, "F"), zq_from(zq.at("G"), q, "G"),
                            zq_from(zq.at("H"), q, "H"), zq_from(zq.at("R"), q, "R"),
                            zq_from(zq.at("P"), q, "P"), zq.at("J").get<u64>(), scaling};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("realization: ") + e.what());
    }
}

void save_key(const SecretKey& sk, const std::string& path) {
    json j;
    j["q"] = sk.mod().value();
    j["N"] = sk.dim();
    j["sigma"] = sk.sigma;
    json entries = json::array();
    for (std::size_t i = 0; i < sk.dim(); ++i) entries.push_back(sk.key.at(i, 0));
    j["sk"] = std::move(entries);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

SecretKey load_key(const std::string& path) {
    json j = parse_file(path);
    try {
        Modulus q(j.at("q").get<u64>());
        const auto& entries = j.at("sk");
        ZqMatrix key(entries.size(), 1, q);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            u64 v = entries[i].get<u64>();
            if (v >= q.value()) throw ConfigError("key entry out of range");
            key.at(i, 0) = v;
        }
        if (key.rows() != j.at("N").get<std::size_t>())
            throw ConfigError("key length disagrees with N");
        return SecretKey{std::move(key), j.at("sigma").get<double>()};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("key file: ") + e.what());
    }
}

} // namespace rdlwe
