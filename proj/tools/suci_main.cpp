// suci - command-line front end for SUPI/SUCI concealment, toy-curve
// demonstrations, and the IMSI-catcher registration simulator.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "suci/ecies.hpp"
#include "suci/errors.hpp"
#include "suci/identifiers.hpp"
#include "suci/netsim.hpp"
#include "suci/protection.hpp"
#include "suci/toy_curve.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitUsage = 2;

// All-0x01 ephemeral scalar (pre-clamp), matching the pinned golden vector.
suci::Bytes fixed_ephemeral_scalar() { return suci::Bytes(32, 0x01); }

int run_keygen(const std::string& profile_name, const std::string& out_prefix) {
    suci::EciesProfile profile = suci::profile_from_name(profile_name);
    auto rng = suci::system_random();
    suci::HomeNetworkKeyPair pair = suci::generate_keypair(profile, rng);
    suci::write_key_file(out_prefix + ".priv", profile, pair.private_key);
    suci::write_key_file(out_prefix + ".pub", profile, pair.public_key);
    std::cout << suci::to_hex(pair.public_key) << "\n";
    return kExitOk;
}

int run_conceal(const std::string& supi_text, const std::string& policy_file,
                bool insecure_fixed_ephemeral) {
    suci::Supi supi = [&] {
        try {
            return suci::parse_supi(supi_text);
        } catch (const suci::InvalidSupi& e) {
            std::cerr << "error: " << e.what() << "\n";
            std::exit(kExitUsage);
        }
    }();
    suci::OperatorPolicy policy = suci::load_policy(policy_file);
    suci::ConcealResult result = [&] {
        if (insecure_fixed_ephemeral && policy.preferred_scheme &&
            policy.home_public_key) {
            suci::Bytes eph = fixed_ephemeral_scalar();
            return suci::conceal_supi_with_ephemeral(supi, policy, eph);
        }
        auto rng = suci::system_random();
        return suci::conceal_supi(supi, policy, rng);
    }();
    if (result.downgraded)
        std::cerr << "warning: falling back to the null scheme (no usable "
                     "home network key or concealment disabled)\n";
    std::cout << suci::serialize_suci(result.suci) << "\n";
    return kExitOk;
}

int run_deconceal(const std::string& suci_text, const std::string& key_file,
                  int key_id) {
    suci::Suci parsed = suci::parse_suci(suci_text);
    suci::KeyStore store;
    if (!key_file.empty()) {
        auto [profile, key] = suci::read_key_file(key_file);
        store.emplace(key_id,
                      suci::HomeNetworkPrivateKey{profile, std::move(key)});
    }
    suci::Supi supi = suci::deconceal_suci(parsed, store);
    std::cout << suci::serialize_supi(supi) << "\n";
    return kExitOk;
}

int run_curve(std::int64_t p, std::int64_t a, std::int64_t b,
              const std::string& out_file) {
    suci::toy::ToyCurve curve(p, a, b);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_file.empty()) {
        file.open(out_file);
        if (!file)
            throw suci::Error("cannot open output file: " + out_file);
        out = &file;
    }
    for (const auto& pt : curve.enumerate_points()) {
        if (pt.infinity)
            continue;
        *out << pt.x << "," << pt.y << "\n";
    }
    return kExitOk;
}

int run_sim(const std::string& scenario_file, const std::string& trace_out) {
    suci::sim::SimScenario scenario = [&] {
        try {
            return suci::sim::load_scenario(scenario_file);
        } catch (const suci::ParseError& e) {
            std::cerr << "error: " << e.what() << "\n";
            std::exit(kExitUsage);
        }
    }();
    suci::sim::SimTrace trace = suci::sim::run_registration(scenario);
    std::string exported = suci::sim::export_trace(trace);
    if (!trace_out.empty()) {
        std::ofstream out(trace_out, std::ios::binary);
        if (!out)
            throw suci::Error("cannot open trace file: " + trace_out);
        out << exported;
    } else {
        std::cout << exported;
    }
    std::cout << "final_ue_state=" << suci::sim::to_string(trace.final_ue_state)
              << "\n";
    int identifying = 0;
    for (const auto& cap : trace.captured_identities)
        if (cap.identifying)
            ++identifying;
    std::cout << "captures=" << trace.captured_identities.size()
              << " identifying=" << identifying << "\n";
    for (const auto& cap : trace.captured_identities) {
        std::cout << "captured " << cap.identity
                  << (cap.identifying ? "" : " (non-identifying)");
        if (cap.position_estimate) {
            double ex = cap.position_estimate->x - scenario.ue_true_position.x;
            double ey = cap.position_estimate->y - scenario.ue_true_position.y;
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          " estimate=(%.6f,%.6f) error=%.6g m",
                          cap.position_estimate->x, cap.position_estimate->y,
                          std::hypot(ex, ey));
            std::cout << buf;
        }
        std::cout << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"5G SUCI concealment and IMSI-catcher simulation toolkit"};
    app.require_subcommand(1);

    std::string profile = "profile-a";
    std::string out_prefix = "hn";
    auto* keygen = app.add_subcommand("keygen", "Generate a home network key pair");
    keygen->add_option("--profile", profile, "profile-a or profile-b")
        ->check(CLI::IsMember({"profile-a", "profile-b"}));
    keygen->add_option("--out", out_prefix, "output file prefix");

    std::string supi_text;
    std::string policy_file;
    bool insecure_fixed = false;
    auto* conceal = app.add_subcommand("conceal", "Conceal a SUPI into a SUCI");
    conceal->add_option("supi", supi_text, "SUPI, e.g. 24201-534567890")
        ->required();
    conceal->add_option("--policy", policy_file, "operator policy file")
        ->required();
    conceal->add_flag("--insecure-fixed-ephemeral", insecure_fixed,
                      "use a fixed ephemeral key (testing only)");

    std::string suci_text;
    std::string key_file;
    int key_id = 0;
    auto* deconceal = app.add_subcommand("deconceal", "Recover the SUPI from a SUCI");
    deconceal->add_option("suci", suci_text, "SUCI string")->required();
    deconceal->add_option("--key", key_file, "home network private key file");
    deconceal->add_option("--key-id", key_id,
                          "key id the private key is stored under");

    std::int64_t curve_p = 89;
    std::int64_t curve_a = -1;
    std::int64_t curve_b = 0;
    std::string curve_out;
    auto* curve = app.add_subcommand(
        "curve", "Emit the points of a toy curve as CSV (default: y^2 = x^3 - x over F_89)");
    curve->add_option("--p", curve_p, "prime modulus");
    curve->add_option("--a", curve_a, "curve coefficient a");
    curve->add_option("--b", curve_b, "curve coefficient b");
    curve->add_option("--out", curve_out, "output CSV file (default stdout)");

    std::string scenario_file;
    std::string trace_out;
    auto* sim = app.add_subcommand("sim", "Run a registration simulation");
    sim->add_option("scenario", scenario_file, "scenario file")->required();
    sim->add_option("--trace", trace_out, "trace output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*keygen)
            return run_keygen(profile, out_prefix);
        if (*conceal)
            return run_conceal(supi_text, policy_file, insecure_fixed);
        if (*deconceal)
            return run_deconceal(suci_text, key_file, key_id);
        if (*curve)
            return run_curve(curve_p, curve_a, curve_b, curve_out);
        if (*sim)
            return run_sim(scenario_file, trace_out);
    } catch (const suci::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    return kExitUsage;
}
