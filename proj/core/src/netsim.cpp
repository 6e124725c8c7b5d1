#include "suci/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "suci/ecies.hpp"
#include "suci/errors.hpp"

namespace suci::sim {
namespace {

constexpr double kCollinearEps = 1e-9;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

double dist(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool is_station(EntityKind kind) {
    return kind == EntityKind::GnB || kind == EntityKind::RogueGnB;
}

const SimEntity* find_entity(const SimScenario& scenario,
                             const std::string& id) {
    for (const auto& e : scenario.entities)
        if (e.id == id)
            return &e;
    return nullptr;
}

Bytes default_long_term_key() {
    return Bytes{0x4c, 0x54, 0x4b, 0x00, 0x01, 0x02, 0x03, 0x04,
                 0x05, 0x06, 0x07, 0x08, 0x09, 0x0a, 0x0b, 0x0c};
}

/// Event-building helper owning the virtual clock and sequence counter.
class TraceBuilder {
public:
    void message(SimMessage msg) {
        ++time_;
        SimEvent ev;
        ev.time = time_;
        ev.seq = seq_++;
        ev.type = SimEvent::Type::Message;
        ev.message = std::move(msg);
        events_.push_back(std::move(ev));
    }

    void state_change(const std::string& entity, const std::string& state) {
        SimEvent ev;
        ev.time = time_;
        ev.seq = seq_++;
        ev.type = SimEvent::Type::StateChange;
        ev.entity = entity;
        ev.state = state;
        events_.push_back(std::move(ev));
    }

    std::vector<SimEvent> take() { return std::move(events_); }

private:
    std::vector<SimEvent> events_;
    std::int64_t time_ = 0;
    int seq_ = 0;
};

} // namespace

double received_signal(const SignalModel& model, double tx_power,
                       double distance) {
    if (distance < 0)
        throw OutOfModel("negative distance");
    double d = std::max(distance, model.reference_distance);
    return tx_power - 10.0 * model.path_loss_exponent *
                          std::log10(d / model.reference_distance);
}

double signal_to_distance(const SignalModel& model, double tx_power,
                          double observed_signal) {
    if (observed_signal > tx_power)
        throw OutOfModel("observed signal exceeds transmit power");
    double exponent =
        (tx_power - observed_signal) / (10.0 * model.path_loss_exponent);
    return model.reference_distance * std::pow(10.0, exponent);
}

Vec2 trilaterate(const std::vector<Vec2>& anchors,
                 const std::vector<double>& distances) {
    if (anchors.size() < 3 || anchors.size() != distances.size())
        throw DegenerateGeometry("trilateration needs >= 3 anchor/distance pairs");
    // Subtract the first circle equation from the rest:
    //   2(xi - x0) x + 2(yi - y0) y = ri0
    // then solve the overdetermined 2-unknown system by normal equations.
    double ata00 = 0, ata01 = 0, ata11 = 0, atb0 = 0, atb1 = 0;
    const Vec2& a0 = anchors[0];
    double d0sq = distances[0] * distances[0];
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        double ax = 2.0 * (anchors[i].x - a0.x);
        double ay = 2.0 * (anchors[i].y - a0.y);
        double b = d0sq - distances[i] * distances[i] +
                   (anchors[i].x * anchors[i].x - a0.x * a0.x) +
                   (anchors[i].y * anchors[i].y - a0.y * a0.y);
        ata00 += ax * ax;
        ata01 += ax * ay;
        ata11 += ay * ay;
        atb0 += ax * b;
        atb1 += ay * b;
    }
    double det = ata00 * ata11 - ata01 * ata01;
    double scale = std::max(ata00, ata11);
    if (scale <= 0 || std::abs(det) <= kCollinearEps * scale * scale)
        throw DegenerateGeometry("anchors are collinear");
    return Vec2{(ata11 * atb0 - ata01 * atb1) / det,
                (ata00 * atb1 - ata01 * atb0) / det};
}

std::string to_string(EntityKind kind) {
    switch (kind) {
    case EntityKind::Ue: return "ue";
    case EntityKind::GnB: return "gnb";
    case EntityKind::Core: return "core";
    case EntityKind::RogueGnB: return "rogue";
    }
    return "?";
}

std::string to_string(UeState state) {
    switch (state) {
    case UeState::PlmnSearch: return "PlmnSearch";
    case UeState::Deregistered: return "Deregistered";
    case UeState::RegisterInitiated: return "RegisterInitiated";
    case UeState::Authenticating: return "Authenticating";
    case UeState::SecurityMode: return "SecurityMode";
    case UeState::Registered: return "Registered";
    }
    return "?";
}

std::string to_string(MsgKind kind) {
    switch (kind) {
    case MsgKind::RegistrationRequest: return "RegistrationRequest";
    case MsgKind::AuthenticationRequest: return "AuthenticationRequest";
    case MsgKind::AuthenticationResponse: return "AuthenticationResponse";
    case MsgKind::SecurityModeCommand: return "SecurityModeCommand";
    case MsgKind::SecurityModeComplete: return "SecurityModeComplete";
    case MsgKind::RegistrationAccept: return "RegistrationAccept";
    case MsgKind::RrcReconfiguration: return "RrcReconfiguration";
    case MsgKind::RrcMeasurementReport: return "RrcMeasurementReport";
    }
    return "?";
}

AdversaryMode adversary_mode_from_name(std::string_view name) {
    if (name == "off") return AdversaryMode::Off;
    if (name == "passive") return AdversaryMode::PassiveCapture;
    if (name == "trilateration") return AdversaryMode::Trilateration;
    if (name == "locationinfo") return AdversaryMode::LocationInfo;
    throw ParseError("unknown adversary mode: '" + std::string(name) + "'");
}

std::string to_string(AdversaryMode mode) {
    switch (mode) {
    case AdversaryMode::Off: return "off";
    case AdversaryMode::PassiveCapture: return "passive";
    case AdversaryMode::Trilateration: return "trilateration";
    case AdversaryMode::LocationInfo: return "locationinfo";
    }
    return "?";
}

SimTrace run_registration(const SimScenario& scenario) {
    SimTrace trace;
    TraceBuilder builder;
    UeState ue_state = UeState::PlmnSearch;
    const std::string ue_id = "ue";
    builder.state_change(ue_id, to_string(ue_state));

    // Cell selection: strongest received signal at the UE's true position,
    // ties broken by lexicographic entity id.
    const SimEntity* serving = nullptr;
    double best_signal = 0;
    for (const auto& e : scenario.entities) {
        if (!is_station(e.kind))
            continue;
        double s = received_signal(scenario.signal_model, e.tx_power,
                                   dist(scenario.ue_true_position, e.position));
        if (!serving || s > best_signal ||
            (s == best_signal && e.id < serving->id)) {
            serving = &e;
            best_signal = s;
        }
    }
    if (!serving) {
        trace.events = builder.take();
        trace.final_ue_state = UeState::PlmnSearch;
        return trace;
    }
    trace.selected_station = serving->id;
    ue_state = UeState::Deregistered;
    builder.state_change(ue_id, to_string(ue_state));

    auto rng = seeded_random(scenario.rng_seed);

    // Registration Request, carrying the identity the policy dictates.
    SimMessage reg;
    reg.from = ue_id;
    reg.to = serving->id;
    reg.kind = MsgKind::RegistrationRequest;
    if (scenario.identity_mode == IdentityMode::PlaintextSupi) {
        reg.plaintext_supi = serialize_supi(scenario.ue_supi);
    } else {
        ConcealResult result =
            conceal_supi(scenario.ue_supi, scenario.ue_policy, rng);
        reg.suci = serialize_suci(result.suci);
    }
    builder.message(std::move(reg));
    ue_state = UeState::RegisterInitiated;
    builder.state_change(ue_id, to_string(ue_state));

    Bytes ltk = scenario.long_term_key.empty() ? default_long_term_key()
                                               : scenario.long_term_key;

    if (serving->kind == EntityKind::GnB) {
        // Legitimate path: the core runs the toy challenge-response, then the
        // security-mode exchange, then accepts.
        const SimEntity* core = nullptr;
        for (const auto& e : scenario.entities)
            if (e.kind == EntityKind::Core) {
                core = &e;
                break;
            }
        std::string net_id = core ? core->id : serving->id;

        Bytes nonce(16);
        rng(nonce);
        SimMessage auth_req;
        auth_req.from = net_id;
        auth_req.to = ue_id;
        auth_req.kind = MsgKind::AuthenticationRequest;
        auth_req.nonce_hex = to_hex(nonce);
        builder.message(std::move(auth_req));
        ue_state = UeState::Authenticating;
        builder.state_change(ue_id, to_string(ue_state));

        Bytes response = hmac_sha256(ltk, nonce);
        SimMessage auth_resp;
        auth_resp.from = ue_id;
        auth_resp.to = net_id;
        auth_resp.kind = MsgKind::AuthenticationResponse;
        auth_resp.response_hex = to_hex(response);
        builder.message(std::move(auth_resp));

        Bytes expected = hmac_sha256(ltk, nonce);
        if (expected == response) {
            SimMessage smc;
            smc.from = net_id;
            smc.to = ue_id;
            smc.kind = MsgKind::SecurityModeCommand;
            builder.message(std::move(smc));
            ue_state = UeState::SecurityMode;
            builder.state_change(ue_id, to_string(ue_state));

            SimMessage smp;
            smp.from = ue_id;
            smp.to = net_id;
            smp.kind = MsgKind::SecurityModeComplete;
            builder.message(std::move(smp));

            SimMessage accept;
            accept.from = net_id;
            accept.to = ue_id;
            accept.kind = MsgKind::RegistrationAccept;
            builder.message(std::move(accept));
            ue_state = UeState::Registered;
            builder.state_change(ue_id, to_string(ue_state));
        }
    } else if (scenario.adversary_mode == AdversaryMode::Trilateration ||
               scenario.adversary_mode == AdversaryMode::LocationInfo) {
        // The catcher cannot authenticate (no long-term key) but can still
        // solicit a measurement report before the UE stalls.
        SimMessage rrc;
        rrc.from = serving->id;
        rrc.to = ue_id;
        rrc.kind = MsgKind::RrcReconfiguration;
        builder.message(std::move(rrc));

        SimMessage report;
        report.from = ue_id;
        report.to = serving->id;
        report.kind = MsgKind::RrcMeasurementReport;
        for (const auto& e : scenario.entities) {
            if (!is_station(e.kind))
                continue;
            report.measurements.push_back(CellMeasurement{
                e.id, received_signal(scenario.signal_model, e.tx_power,
                                      dist(scenario.ue_true_position,
                                           e.position))});
        }
        std::sort(report.measurements.begin(), report.measurements.end(),
                  [](const auto& a, const auto& b) {
                      return a.cell_id < b.cell_id;
                  });
        if (scenario.adversary_mode == AdversaryMode::LocationInfo)
            report.gps = scenario.ue_true_position;
        builder.message(std::move(report));
    }

    trace.events = builder.take();
    trace.final_ue_state = ue_state;
    trace.captured_identities =
        adversary_capture(trace.events, scenario.adversary_mode, scenario);
    return trace;
}

std::vector<Capture> adversary_capture(const std::vector<SimEvent>& events,
                                       AdversaryMode mode,
                                       const SimScenario& scenario) {
    std::vector<Capture> captures;
    if (mode == AdversaryMode::Off)
        return captures;

    // Position estimate, if the mode and the trace support one.
    std::optional<Vec2> estimate;
    for (const auto& ev : events) {
        if (ev.type != SimEvent::Type::Message ||
            ev.message.kind != MsgKind::RrcMeasurementReport)
            continue;
        if (mode == AdversaryMode::LocationInfo && ev.message.gps) {
            estimate = ev.message.gps;
        } else if (mode == AdversaryMode::Trilateration) {
            std::vector<Vec2> anchors;
            std::vector<double> distances;
            for (const auto& m : ev.message.measurements) {
                const SimEntity* cell = find_entity(scenario, m.cell_id);
                if (!cell)
                    continue;
                anchors.push_back(cell->position);
                distances.push_back(signal_to_distance(
                    scenario.signal_model, cell->tx_power, m.signal));
            }
            estimate = trilaterate(anchors, distances);
        }
    }

    for (const auto& ev : events) {
        if (ev.type != SimEvent::Type::Message ||
            ev.message.kind != MsgKind::RegistrationRequest)
            continue;
        const SimEntity* target = find_entity(scenario, ev.message.to);
        if (!target || target->kind != EntityKind::RogueGnB)
            continue;
        Capture cap;
        cap.adversary_id = target->id;
        cap.position_estimate = estimate;
        if (ev.message.plaintext_supi) {
            cap.identity = *ev.message.plaintext_supi;
            cap.identifying = true;
        } else if (ev.message.suci) {
            Suci suci = parse_suci(*ev.message.suci);
            if (suci.protection_scheme_id() == kSchemeNull) {
                const auto& null = std::get<NullOutput>(suci.scheme_output());
                cap.identity = suci.plmn().mcc() + suci.plmn().mnc() + "-" +
                               null.msin;
                cap.identifying = true;
            } else {
                const auto& ecies = std::get<EciesOutput>(suci.scheme_output());
                cap.identity = to_hex(ecies.ciphertext);
                cap.identifying = false;
            }
        } else {
            continue;
        }
        captures.push_back(std::move(cap));
    }
    return captures;
}

std::string export_trace(const SimTrace& trace) {
    std::ostringstream out;
    for (const auto& ev : trace.events) {
        out << "t=" << ev.time << " seq=" << ev.seq;
        if (ev.type == SimEvent::Type::StateChange) {
            out << " state " << ev.entity << " " << ev.state << "\n";
            continue;
        }
        const SimMessage& m = ev.message;
        out << " msg " << to_string(m.kind) << " " << m.from << "->" << m.to;
        if (m.plaintext_supi)
            out << " identity=supi:" << *m.plaintext_supi;
        if (m.suci)
            out << " identity=suci:" << *m.suci;
        if (!m.nonce_hex.empty())
            out << " nonce=" << m.nonce_hex;
        if (!m.response_hex.empty())
            out << " response=" << m.response_hex;
        if (!m.measurements.empty()) {
            out << " cells=[";
            for (std::size_t i = 0; i < m.measurements.size(); ++i) {
                if (i)
                    out << ";";
                out << m.measurements[i].cell_id << ":"
                    << fmt_double(m.measurements[i].signal);
            }
            out << "]";
        }
        if (m.gps)
            out << " gps=(" << fmt_double(m.gps->x) << ","
                << fmt_double(m.gps->y) << ")";
        out << "\n";
    }
    out << "final_state ue " << to_string(trace.final_ue_state) << "\n";
    if (!trace.selected_station.empty())
        out << "selected " << trace.selected_station << "\n";
    for (const auto& cap : trace.captured_identities) {
        out << "capture adversary=" << cap.adversary_id
            << " identity=" << cap.identity
            << " identifying=" << (cap.identifying ? 1 : 0);
        if (cap.position_estimate)
            out << " estimate=(" << fmt_double(cap.position_estimate->x) << ","
                << fmt_double(cap.position_estimate->y) << ")";
        else
            out << " estimate=none";
        out << "\n";
    }
    return out.str();
}

SimScenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open scenario file: " + path.string());

    SimScenario scenario;

    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };

    SimEntity* current = nullptr;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[' && line.back() == ']') {
            std::istringstream header(line.substr(1, line.size() - 2));
            std::string kind, id;
            header >> kind >> id;
            if (id.empty())
                throw ParseError("scenario line " + std::to_string(line_no) +
                                 ": entity block needs '[kind id]'");
            SimEntity entity;
            entity.id = id;
            if (kind == "gnb")
                entity.kind = EntityKind::GnB;
            else if (kind == "rogue")
                entity.kind = EntityKind::RogueGnB;
            else if (kind == "core")
                entity.kind = EntityKind::Core;
            else
                throw ParseError("scenario line " + std::to_string(line_no) +
                                 ": unknown entity kind '" + kind + "'");
            scenario.entities.push_back(std::move(entity));
            current = &scenario.entities.back();
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("scenario line " + std::to_string(line_no) +
                             " is not 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (current) {
            if (key == "position") {
                std::istringstream vs(value);
                if (!(vs >> current->position.x >> current->position.y))
                    throw ParseError("bad position on line " +
                                     std::to_string(line_no));
            } else if (key == "tx_power") {
                current->tx_power = std::stod(value);
            } else {
                throw ParseError("unknown entity key '" + key + "' on line " +
                                 std::to_string(line_no));
            }
            continue;
        }
        if (key == "seed") {
            scenario.rng_seed = std::stoull(value);
        } else if (key == "adversary") {
            scenario.adversary_mode = adversary_mode_from_name(value);
        } else if (key == "supi") {
            scenario.ue_supi = parse_supi(value);
        } else if (key == "identity") {
            if (value == "plaintext")
                scenario.identity_mode = IdentityMode::PlaintextSupi;
            else if (value == "suci")
                scenario.identity_mode = IdentityMode::Suci;
            else
                throw ParseError("identity must be 'plaintext' or 'suci'");
        } else if (key == "policy") {
            std::filesystem::path p(value);
            if (p.is_relative())
                p = path.parent_path() / p;
            scenario.ue_policy = load_policy(p);
        } else if (key == "ue_position") {
            std::istringstream vs(value);
            if (!(vs >> scenario.ue_true_position.x >>
                  scenario.ue_true_position.y))
                throw ParseError("bad ue_position on line " +
                                 std::to_string(line_no));
        } else if (key == "path_loss_exponent") {
            scenario.signal_model.path_loss_exponent = std::stod(value);
        } else if (key == "reference_distance") {
            scenario.signal_model.reference_distance = std::stod(value);
        } else if (key == "long_term_key") {
            scenario.long_term_key = from_hex(value);
        } else if (key == "max_steps") {
            scenario.max_steps = std::stoul(value);
        } else {
            throw ParseError("unknown scenario key '" + key + "' on line " +
                             std::to_string(line_no));
        }
    }
    SimEntity ue;
    ue.id = "ue";
    ue.kind = EntityKind::Ue;
    ue.position = scenario.ue_true_position;
    scenario.entities.push_back(std::move(ue));
    return scenario;
}

} // namespace suci::sim
