#ifndef SUCI_ECIES_HPP
#define SUCI_ECIES_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include "suci/hex.hpp"

namespace suci {

/// The two standardized SUCI cipher suites.
enum class EciesProfile {
    A, // Curve25519, 32-octet public keys
    B, // secp256r1, 33-octet compressed public keys
};

constexpr std::size_t public_key_len(EciesProfile profile) {
    return profile == EciesProfile::A ? 32 : 33;
}
constexpr std::size_t private_key_len(EciesProfile) { return 32; }

std::string profile_name(EciesProfile profile); // "profile-a" / "profile-b"
EciesProfile profile_from_name(std::string_view name);

/// Fills the span with uniform random octets. Supplied per call so tests and
/// the simulator can run off a fixed seed.
using RandomSource = std::function<void(std::span<std::uint8_t>)>;

RandomSource system_random();
RandomSource seeded_random(std::uint64_t seed);

struct HomeNetworkKeyPair {
    EciesProfile profile;
    Bytes private_key;
    Bytes public_key;
};

HomeNetworkKeyPair generate_keypair(EciesProfile profile, RandomSource& rng);

/// Rebuilds a key pair from raw private-key octets (profile A scalars are
/// clamped; profile B scalars are reduced mod the group order).
HomeNetworkKeyPair keypair_from_private(EciesProfile profile,
                                        std::span<const std::uint8_t> private_key);

struct SharedSecret {
    EciesProfile profile;
    std::array<std::uint8_t, 32> secret;
};

SharedSecret key_agreement(EciesProfile profile,
                           std::span<const std::uint8_t> private_key,
                           std::span<const std::uint8_t> peer_public_key);

/// ANSI-X9.63 KDF with SHA-256; shared info is the ephemeral public key.
Bytes kdf(const SharedSecret& shared,
          std::span<const std::uint8_t> ephemeral_public_key,
          std::size_t out_len);

struct DerivedKeys {
    std::array<std::uint8_t, 16> enc_key;
    std::array<std::uint8_t, 16> initial_counter_block;
    std::array<std::uint8_t, 32> mac_key;
};

DerivedKeys derive_keys(const SharedSecret& shared,
                        std::span<const std::uint8_t> ephemeral_public_key);

struct EciesEnvelope {
    Bytes ephemeral_public_key;
    Bytes ciphertext; // AES-128-CTR, same length as the plaintext
    Bytes mac;        // first 8 octets of HMAC-SHA-256 over the ciphertext
};

EciesEnvelope conceal(EciesProfile profile,
                      std::span<const std::uint8_t> hn_public_key,
                      std::span<const std::uint8_t> plaintext,
                      RandomSource& rng);

/// Same as conceal but with a caller-supplied ephemeral private key, for
/// golden-vector tests and the CLI's insecure fixed-ephemeral flag.
EciesEnvelope conceal_with_ephemeral(EciesProfile profile,
                                     std::span<const std::uint8_t> hn_public_key,
                                     std::span<const std::uint8_t> plaintext,
                                     std::span<const std::uint8_t> ephemeral_private_key);

/// Verifies the MAC (constant-time) before any decryption; throws
/// IntegrityFailure without releasing plaintext on mismatch.
Bytes deconceal(EciesProfile profile,
                std::span<const std::uint8_t> hn_private_key,
                std::span<const std::uint8_t> ephemeral_public_key,
                std::span<const std::uint8_t> ciphertext,
                std::span<const std::uint8_t> mac);

/// Full 32-octet HMAC-SHA-256 tag. Also used by the simulator's toy
/// challenge-response authentication.
Bytes hmac_sha256(std::span<const std::uint8_t> key,
                  std::span<const std::uint8_t> data);

/// Key files: one key per line, "profile-a:<hex>" or "profile-b:<hex>".
void write_key_file(const std::filesystem::path& path, EciesProfile profile,
                    std::span<const std::uint8_t> key);
std::pair<EciesProfile, Bytes> read_key_file(const std::filesystem::path& path);

} // namespace suci

#endif
