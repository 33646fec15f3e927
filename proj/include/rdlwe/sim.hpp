#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rdlwe/controller.hpp"
#include "rdlwe/encryptor.hpp"

namespace rdlwe {

enum class AttackType { None, MeasurementBias, MeasurementReplay, OutputBias };

struct AttackSpec {
    AttackType type = AttackType::None;
    std::size_t start = 0; // first attacked step
    std::size_t stop = 0;  // first step no longer attacked
    double magnitude = 0;  // real units (measurement or actuation)
};

struct CryptoParams {
    u64 q;
    std::size_t key_dim; // N
    double sigma;
    u64 seed;
};

struct ScenarioConfig {
    PlantModel plant;
    ObserverController ctrl;
    Scaling scaling;
    std::vector<long long> target_charpoly;
    CryptoParams crypto;
    std::size_t horizon = 1;
    double threshold = 0;       // detector threshold, >= 0
    double signal_bound = 1e12; // real-unit guard against modulus wraparound
    AttackSpec attack;
};

struct SimRecord {
    std::size_t t;
    double y;
    double u_enc;
    double u_ref;
    double r_disclosed;
    double r_ref;
    bool alarm;
    bool attack_active;
};

struct SimTrace {
    std::vector<SimRecord> records;
    double max_residue_gap = 0; // max |r_ref - r_disclosed|
    double max_input_gap = 0;   // max |u_ref - u_enc|
    std::size_t alarm_count = 0;
    std::size_t first_alarm = SIZE_MAX;
};

/// x+ = Ax + Bu with y = Cx read before the update.  Throws NonFinite when
/// the state leaves +-1e12.
std::pair<Eigen::VectorXd, double> step_plant(const PlantModel& plant, const Eigen::VectorXd& x,
                                              double u);

struct RefCtrlOut {
    Eigen::VectorXd state;
    double u;
    double residue;
};
RefCtrlOut step_reference_controller(const PlantModel& plant, const ObserverController& ctrl,
                                     const Eigen::VectorXd& xhat, double y);

/// Residue row of the encrypted controller: H * state + J * measurement.
Ciphertext residue_row(const Ciphertext& state, const Ciphertext& measurement,
                       const ScaledParams& params);

struct EncCtrlOut {
    Ciphertext state;
    Ciphertext output;
    Ciphertext residue;
};
/// One encrypted controller step:
///   x+ = F x + G y + R rfb,  u = P x,  r = H x + J y   (all over ciphertexts).
EncCtrlOut step_encrypted_controller(const Ciphertext& state, const Ciphertext& measurement,
                                     const Ciphertext& feedback, const ScaledParams& params);

/// Instantaneous threshold detector.  Takes only the restored residue:
/// this boundary is what keeps the detector key-free.
bool detect(double r_restored, double threshold);

/// Homomorphic additive forgery: adds the trivial encryption [delta, 0...0]
/// (no key required).
Ciphertext inject_attack(const Ciphertext& ct, const ZqMatrix& delta);

/// SystemZq view of the scaled controller (the encryptor's target system).
SystemZq controller_system(const ScaledParams& params);

/// Run the encrypted loop and the unencrypted reference loop side by side.
SimTrace run_scenario(const ScenarioConfig& cfg);

/// 5x the largest reference residue magnitude of an attack-free run over
/// the configured horizon (the default detector threshold).
double calibrate_threshold(const ScenarioConfig& cfg);

/// Rank structure of the closed loop seen from the residue: the full state
/// [x; xh] is not reconstructible from the residue, the estimation error
/// x - xh is.
struct ResidueObservability {
    std::size_t loop_rank; // observability rank of the 2n-state loop
    std::size_t loop_dim;  // 2n
    std::size_t error_rank; // observability rank of the error subsystem
    std::size_t error_dim;  // n
};
ResidueObservability residue_observability(const PlantModel& plant,
                                           const ObserverController& ctrl);

/// CSV with header t,y,u_enc,u_ref,r_disclosed,r_ref,alarm,attack_active
/// and 17 significant digits on floating values.
void write_csv(const SimTrace& trace, std::ostream& out);
void write_csv_file(const SimTrace& trace, const std::string& path);

} // namespace rdlwe
