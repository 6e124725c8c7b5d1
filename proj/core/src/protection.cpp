#include "suci/protection.hpp"

#include <fstream>

#include "suci/errors.hpp"

namespace suci {
namespace {

int scheme_id_for(EciesProfile profile) {
    return profile == EciesProfile::A ? kSchemeProfileA : kSchemeProfileB;
}

ConcealResult conceal_impl(const Supi& supi, const OperatorPolicy& policy,
                           RandomSource* rng,
                           std::span<const std::uint8_t> fixed_ephemeral) {
    bool want_ecies = policy.suci_enabled && policy.preferred_scheme.has_value();
    bool have_key = policy.home_public_key.has_value();
    if (!want_ecies || !have_key) {
        // The null fallback the operator discretion model allows: no key (or
        // concealment disabled) means the MSIN goes out in the clear.
        bool downgraded = policy.preferred_scheme.has_value() &&
                          (!policy.suci_enabled || !have_key);
        Suci suci(0, supi.plmn(), policy.routing_indicator, kSchemeNull,
                  policy.home_network_public_key_id, NullOutput{supi.msin()});
        return {std::move(suci), downgraded};
    }
    EciesProfile profile = *policy.preferred_scheme;
    Bytes packed = tbcd_encode(supi.msin());
    EciesEnvelope env =
        fixed_ephemeral.empty()
            ? conceal(profile, *policy.home_public_key, packed, *rng)
            : conceal_with_ephemeral(profile, *policy.home_public_key, packed,
                                     fixed_ephemeral);
    Suci suci(0, supi.plmn(), policy.routing_indicator, scheme_id_for(profile),
              policy.home_network_public_key_id,
              EciesOutput{std::move(env.ephemeral_public_key),
                          std::move(env.ciphertext), std::move(env.mac)});
    return {std::move(suci), false};
}

} // namespace

ConcealResult conceal_supi(const Supi& supi, const OperatorPolicy& policy,
                           RandomSource& rng) {
    return conceal_impl(supi, policy, &rng, {});
}

ConcealResult conceal_supi_with_ephemeral(
    const Supi& supi, const OperatorPolicy& policy,
    std::span<const std::uint8_t> ephemeral_private_key) {
    return conceal_impl(supi, policy, nullptr, ephemeral_private_key);
}

Supi deconceal_suci(const Suci& suci, const KeyStore& network_keys) {
    if (suci.protection_scheme_id() == kSchemeNull) {
        const auto& null = std::get<NullOutput>(suci.scheme_output());
        return Supi(suci.plmn(), null.msin);
    }
    auto it = network_keys.find(suci.home_network_public_key_id());
    if (it == network_keys.end())
        throw UnknownKeyId("no private key for home network key id " +
                           std::to_string(suci.home_network_public_key_id()));
    const auto& ecies = std::get<EciesOutput>(suci.scheme_output());
    Bytes packed = deconceal(it->second.profile, it->second.private_key,
                             ecies.ephemeral_public_key, ecies.ciphertext,
                             ecies.mac);
    std::string msin;
    try {
        msin = tbcd_decode(packed);
    } catch (const MalformedTbcd& e) {
        throw CorruptPlaintext(std::string("decrypted MSIN is not TBCD: ") +
                               e.what());
    }
    try {
        return Supi(suci.plmn(), msin);
    } catch (const InvalidSupi& e) {
        throw CorruptPlaintext(std::string("decrypted MSIN is invalid: ") +
                               e.what());
    }
}

OperatorPolicy load_policy(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open policy file: " + path.string());
    OperatorPolicy policy;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("policy line " + std::to_string(line_no) +
                             " is not 'key = value'");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string()
                                          : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "suci_enabled") {
            policy.suci_enabled = (value == "true" || value == "1");
        } else if (key == "scheme") {
            if (value == "null")
                policy.preferred_scheme.reset();
            else
                policy.preferred_scheme = profile_from_name(value);
        } else if (key == "key_id") {
            policy.home_network_public_key_id = std::stoi(value);
        } else if (key == "routing_indicator") {
            policy.routing_indicator = value;
        } else if (key == "key_file") {
            std::filesystem::path key_path(value);
            if (key_path.is_relative())
                key_path = path.parent_path() / key_path;
            auto [profile, bytes] = read_key_file(key_path);
            policy.home_public_key = std::move(bytes);
            // scheme stays as declared; a profile mismatch surfaces later as
            // a key-length error
            (void)profile;
        } else {
            throw ParseError("unknown policy key '" + key + "'");
        }
    }
    return policy;
}

} // namespace suci
