#ifndef SUCI_NETSIM_HPP
#define SUCI_NETSIM_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "suci/identifiers.hpp"
#include "suci/protection.hpp"

namespace suci::sim {

struct Vec2 {
    double x = 0;
    double y = 0;
    bool operator==(const Vec2&) const = default;
};

/// Log-distance path loss: tx_power - 10 n log10(max(d, d0)/d0).
struct SignalModel {
    double path_loss_exponent = 2.0;
    double reference_distance = 1.0;
};

double received_signal(const SignalModel& model, double tx_power,
                       double distance);

/// Exact inverse of received_signal; throws OutOfModel when the observation
/// exceeds the transmit power.
double signal_to_distance(const SignalModel& model, double tx_power,
                          double observed_signal);

/// Least-squares circle intersection (first equation subtracted from the
/// rest). Throws DegenerateGeometry for fewer than 3 or collinear anchors.
Vec2 trilaterate(const std::vector<Vec2>& anchors,
                 const std::vector<double>& distances);

enum class EntityKind { Ue, GnB, Core, RogueGnB };

enum class UeState {
    PlmnSearch,
    Deregistered,
    RegisterInitiated,
    Authenticating,
    SecurityMode,
    Registered,
};

std::string to_string(EntityKind kind);
std::string to_string(UeState state);

struct SimEntity {
    std::string id;
    EntityKind kind = EntityKind::GnB;
    Vec2 position;
    double tx_power = 0; // signal units at the reference distance
};

enum class MsgKind {
    RegistrationRequest,
    AuthenticationRequest,
    AuthenticationResponse,
    SecurityModeCommand,
    SecurityModeComplete,
    RegistrationAccept,
    RrcReconfiguration,
    RrcMeasurementReport,
};

std::string to_string(MsgKind kind);

struct CellMeasurement {
    std::string cell_id;
    double signal = 0;
};

struct SimMessage {
    std::string from;
    std::string to;
    MsgKind kind = MsgKind::RegistrationRequest;
    // RegistrationRequest: exactly one identity form
    std::optional<std::string> plaintext_supi;
    std::optional<std::string> suci; // serialized form
    // Authentication challenge/response
    std::string nonce_hex;
    std::string response_hex;
    // RrcMeasurementReport
    std::vector<CellMeasurement> measurements;
    std::optional<Vec2> gps;
};

enum class AdversaryMode { Off, PassiveCapture, Trilateration, LocationInfo };

AdversaryMode adversary_mode_from_name(std::string_view name);
std::string to_string(AdversaryMode mode);

enum class IdentityMode { PlaintextSupi, Suci };

struct SimScenario {
    std::vector<SimEntity> entities;
    Supi ue_supi = Supi(Plmn("242", "01"), "534567890");
    IdentityMode identity_mode = IdentityMode::Suci;
    OperatorPolicy ue_policy;
    Vec2 ue_true_position;
    AdversaryMode adversary_mode = AdversaryMode::Off;
    std::uint64_t rng_seed = 0;
    SignalModel signal_model;
    Bytes long_term_key; // toy AKA pre-shared key
    std::size_t max_steps = 64;
};

struct SimEvent {
    std::int64_t time = 0;
    int seq = 0;
    enum class Type { Message, StateChange } type = Type::Message;
    SimMessage message;          // valid when type == Message
    std::string entity;          // valid when type == StateChange
    std::string state;
};

struct Capture {
    std::string adversary_id;
    std::string identity;    // SUPI string, or ciphertext hex for ECIES
    bool identifying = false;
    std::optional<Vec2> position_estimate;
};

struct SimTrace {
    std::vector<SimEvent> events;
    std::vector<Capture> captured_identities;
    UeState final_ue_state = UeState::PlmnSearch;
    std::string selected_station;
};

/// Runs the registration flow on a virtual clock. Fully determined by the
/// scenario (including rng_seed).
SimTrace run_registration(const SimScenario& scenario);

/// Post-hoc adversary analysis of a trace; run_registration already calls
/// this for the scenario's own mode.
std::vector<Capture> adversary_capture(const std::vector<SimEvent>& events,
                                       AdversaryMode mode,
                                       const SimScenario& scenario);

/// One event per line, stable field order; the determinism contract is over
/// this exact byte stream.
std::string export_trace(const SimTrace& trace);

/// Scenario file: "key = value" lines plus [gnb <id>] / [rogue <id>] entity
/// blocks. Relative paths resolve against the scenario file's directory.
SimScenario load_scenario(const std::filesystem::path& path);

} // namespace suci::sim

#endif
