#ifndef SUCI_PROTECTION_HPP
#define SUCI_PROTECTION_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "suci/ecies.hpp"
#include "suci/identifiers.hpp"

namespace suci {

/// UE-side concealment policy. When suci_enabled is false or no home key is
/// provisioned, concealment silently falls back to the null scheme; the
/// fallback is reported through ConcealResult::downgraded.
struct OperatorPolicy {
    bool suci_enabled = true;
    std::optional<EciesProfile> preferred_scheme; // nullopt = null scheme
    std::optional<Bytes> home_public_key;         // UE-side provisioned key
    int home_network_public_key_id = 0;
    std::string routing_indicator = "0000";
};

struct ConcealResult {
    Suci suci;
    bool downgraded = false; // null fallback taken despite an ECIES preference
};

ConcealResult conceal_supi(const Supi& supi, const OperatorPolicy& policy,
                           RandomSource& rng);

/// Fixed-ephemeral variant for deterministic output (tests, simulator, the
/// CLI's insecure flag).
ConcealResult conceal_supi_with_ephemeral(
    const Supi& supi, const OperatorPolicy& policy,
    std::span<const std::uint8_t> ephemeral_private_key);

struct HomeNetworkPrivateKey {
    EciesProfile profile;
    Bytes private_key;
};

/// Network-side store: home_network_public_key_id -> private key.
using KeyStore = std::map<int, HomeNetworkPrivateKey>;

Supi deconceal_suci(const Suci& suci, const KeyStore& network_keys);

/// "key = value" lines: suci_enabled, scheme, key_id, routing_indicator,
/// key_file. Relative key_file paths resolve against the policy file's
/// directory.
OperatorPolicy load_policy(const std::filesystem::path& path);

} // namespace suci

#endif
