#include "suci/ecies.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <random>

#include <openssl/bn.h>
#include <openssl/crypto.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/obj_mac.h>
#include <openssl/rand.h>

#include "suci/errors.hpp"
#include "suci/identifiers.hpp"

namespace suci {
namespace {

struct EvpPkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct EvpPkeyCtxDeleter {
    void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
struct EvpCipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
struct EvpMdCtxDeleter {
    void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
struct EcGroupDeleter {
    void operator()(EC_GROUP* p) const { EC_GROUP_free(p); }
};
struct EcPointDeleter {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct BnDeleter {
    void operator()(BIGNUM* p) const { BN_free(p); }
};
struct BnCtxDeleter {
    void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};

using PkeyPtr = std::unique_ptr<EVP_PKEY, EvpPkeyDeleter>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, EvpPkeyCtxDeleter>;
using GroupPtr = std::unique_ptr<EC_GROUP, EcGroupDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, EcPointDeleter>;
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;

[[noreturn]] void crypto_fail(const char* what) {
    throw Error(std::string("crypto backend failure: ") + what);
}

const EC_GROUP* p256_group() {
    static GroupPtr group(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1));
    if (!group)
        crypto_fail("EC_GROUP_new_by_curve_name");
    return group.get();
}

void clamp_x25519(Bytes& scalar) {
    scalar[0] &= 0xF8;
    scalar[31] &= 0x7F;
    scalar[31] |= 0x40;
}

Bytes x25519_public(std::span<const std::uint8_t> priv) {
    PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr,
                                             priv.data(), priv.size()));
    if (!key)
        crypto_fail("X25519 private key import");
    Bytes pub(32);
    std::size_t len = pub.size();
    if (EVP_PKEY_get_raw_public_key(key.get(), pub.data(), &len) != 1 ||
        len != 32)
        crypto_fail("X25519 public key export");
    return pub;
}

/// Reduces 32 random octets into a scalar in [1, n-1].
BnPtr p256_scalar(std::span<const std::uint8_t> raw) {
    BnPtr order(BN_new());
    BnCtxPtr ctx(BN_CTX_new());
    if (!order || !ctx ||
        EC_GROUP_get_order(p256_group(), order.get(), ctx.get()) != 1)
        crypto_fail("P-256 group order");
    BnPtr k(BN_bin2bn(raw.data(), static_cast<int>(raw.size()), nullptr));
    BnPtr one(BN_new());
    BnPtr n_minus_1(BN_new());
    if (!k || !one || !n_minus_1 || BN_one(one.get()) != 1 ||
        BN_sub(n_minus_1.get(), order.get(), one.get()) != 1)
        crypto_fail("BN setup");
    // k mod (n-1) + 1 keeps the scalar nonzero
    BnPtr reduced(BN_new());
    if (!reduced ||
        BN_mod(reduced.get(), k.get(), n_minus_1.get(), ctx.get()) != 1 ||
        BN_add(reduced.get(), reduced.get(), one.get()) != 1)
        crypto_fail("scalar reduction");
    return reduced;
}

Bytes bn_to_fixed(const BIGNUM* bn, std::size_t len) {
    Bytes out(len, 0);
    if (BN_bn2binpad(bn, out.data(), static_cast<int>(len)) < 0)
        crypto_fail("BN_bn2binpad");
    return out;
}

Bytes p256_public(std::span<const std::uint8_t> priv) {
    const EC_GROUP* group = p256_group();
    BnCtxPtr ctx(BN_CTX_new());
    BnPtr k(BN_bin2bn(priv.data(), static_cast<int>(priv.size()), nullptr));
    PointPtr pub(EC_POINT_new(group));
    if (!ctx || !k || !pub ||
        EC_POINT_mul(group, pub.get(), k.get(), nullptr, nullptr, ctx.get()) != 1)
        crypto_fail("P-256 scalar multiplication");
    Bytes out(33);
    if (EC_POINT_point2oct(group, pub.get(), POINT_CONVERSION_COMPRESSED,
                           out.data(), out.size(), ctx.get()) != 33)
        crypto_fail("P-256 point compression");
    return out;
}

SharedSecret x25519_agree(std::span<const std::uint8_t> priv,
                          std::span<const std::uint8_t> peer_pub) {
    // X25519 masks the top bit of the u-coordinate, so two encodings would
    // map to one point; reject the non-canonical one.
    if (peer_pub[31] & 0x80)
        throw InvalidPoint("non-canonical Curve25519 point encoding");
    PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr,
                                             priv.data(), priv.size()));
    PkeyPtr peer(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr,
                                             peer_pub.data(), peer_pub.size()));
    if (!key || !peer)
        crypto_fail("X25519 key import");
    PkeyCtxPtr ctx(EVP_PKEY_CTX_new(key.get(), nullptr));
    SharedSecret out{EciesProfile::A, {}};
    std::size_t len = out.secret.size();
    if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
        EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1 ||
        EVP_PKEY_derive(ctx.get(), out.secret.data(), &len) != 1 || len != 32)
        // OpenSSL rejects low-order peer points by failing the derive with an
        // all-zero shared result
        throw DegenerateKey("X25519 produced a degenerate shared secret");
    bool all_zero = std::all_of(out.secret.begin(), out.secret.end(),
                                [](std::uint8_t b) { return b == 0; });
    if (all_zero)
        throw DegenerateKey("X25519 produced an all-zero shared secret");
    return out;
}

SharedSecret p256_agree(std::span<const std::uint8_t> priv,
                        std::span<const std::uint8_t> peer_pub) {
    const EC_GROUP* group = p256_group();
    BnCtxPtr ctx(BN_CTX_new());
    PointPtr peer(EC_POINT_new(group));
    if (!ctx || !peer)
        crypto_fail("P-256 allocation");
    if (EC_POINT_oct2point(group, peer.get(), peer_pub.data(), peer_pub.size(),
                           ctx.get()) != 1)
        throw InvalidPoint("peer public key is not a point on secp256r1");
    if (EC_POINT_is_on_curve(group, peer.get(), ctx.get()) != 1 ||
        EC_POINT_is_at_infinity(group, peer.get()))
        throw InvalidPoint("peer public key is not on secp256r1");
    BnPtr k(BN_bin2bn(priv.data(), static_cast<int>(priv.size()), nullptr));
    PointPtr shared(EC_POINT_new(group));
    if (!k || !shared ||
        EC_POINT_mul(group, shared.get(), nullptr, peer.get(), k.get(),
                     ctx.get()) != 1)
        crypto_fail("P-256 DH multiplication");
    if (EC_POINT_is_at_infinity(group, shared.get()))
        throw InvalidPoint("P-256 DH result is the point at infinity");
    BnPtr x(BN_new());
    if (!x || EC_POINT_get_affine_coordinates(group, shared.get(), x.get(),
                                              nullptr, ctx.get()) != 1)
        crypto_fail("P-256 affine coordinates");
    SharedSecret out{EciesProfile::B, {}};
    Bytes xb = bn_to_fixed(x.get(), 32);
    std::copy(xb.begin(), xb.end(), out.secret.begin());
    return out;
}

Bytes sha256(std::span<const std::uint8_t> data) {
    Bytes out(32);
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                   nullptr) != 1 ||
        len != 32)
        crypto_fail("SHA-256");
    return out;
}

} // namespace

Bytes hmac_sha256(std::span<const std::uint8_t> key,
                  std::span<const std::uint8_t> data) {
    PkeyPtr mac_key(EVP_PKEY_new_raw_private_key(EVP_PKEY_HMAC, nullptr,
                                                 key.data(), key.size()));
    std::unique_ptr<EVP_MD_CTX, EvpMdCtxDeleter> ctx(EVP_MD_CTX_new());
    Bytes out(32);
    std::size_t len = out.size();
    if (!mac_key || !ctx ||
        EVP_DigestSignInit(ctx.get(), nullptr, EVP_sha256(), nullptr,
                           mac_key.get()) != 1 ||
        EVP_DigestSign(ctx.get(), out.data(), &len, data.data(), data.size()) !=
            1 ||
        len != 32)
        crypto_fail("HMAC-SHA-256");
    return out;
}

namespace {

Bytes aes128_ctr(std::span<const std::uint8_t> key,
                 std::span<const std::uint8_t> counter_block,
                 std::span<const std::uint8_t> data) {
    std::unique_ptr<EVP_CIPHER_CTX, EvpCipherCtxDeleter> ctx(
        EVP_CIPHER_CTX_new());
    Bytes out(data.size());
    int len = 0;
    if (!ctx ||
        EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ctr(), nullptr, key.data(),
                           counter_block.data()) != 1 ||
        EVP_EncryptUpdate(ctx.get(), out.data(), &len, data.data(),
                          static_cast<int>(data.size())) != 1 ||
        static_cast<std::size_t>(len) != data.size())
        crypto_fail("AES-128-CTR");
    return out;
}

void check_key_len(EciesProfile profile, std::span<const std::uint8_t> key,
                   std::size_t expected, const char* what) {
    if (key.size() != expected)
        throw Error(std::string(what) + " has wrong length for " +
                    profile_name(profile));
}

} // namespace

std::string profile_name(EciesProfile profile) {
    return profile == EciesProfile::A ? "profile-a" : "profile-b";
}

EciesProfile profile_from_name(std::string_view name) {
    if (name == "profile-a") return EciesProfile::A;
    if (name == "profile-b") return EciesProfile::B;
    throw UnknownScheme("unknown profile name: '" + std::string(name) + "'");
}

RandomSource system_random() {
    return [](std::span<std::uint8_t> out) {
        if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
            crypto_fail("RAND_bytes");
    };
}

RandomSource seeded_random(std::uint64_t seed) {
    return [rng = std::mt19937_64(seed)](std::span<std::uint8_t> out) mutable {
        for (auto& b : out)
            b = static_cast<std::uint8_t>(rng());
    };
}

HomeNetworkKeyPair generate_keypair(EciesProfile profile, RandomSource& rng) {
    Bytes priv(private_key_len(profile));
    rng(priv);
    return keypair_from_private(profile, priv);
}

HomeNetworkKeyPair keypair_from_private(EciesProfile profile,
                                        std::span<const std::uint8_t> private_key) {
    check_key_len(profile, private_key, private_key_len(profile), "private key");
    Bytes priv(private_key.begin(), private_key.end());
    if (profile == EciesProfile::A) {
        clamp_x25519(priv);
        Bytes pub = x25519_public(priv);
        return {profile, std::move(priv), std::move(pub)};
    }
    BnPtr scalar = p256_scalar(priv);
    Bytes reduced = bn_to_fixed(scalar.get(), 32);
    Bytes pub = p256_public(reduced);
    return {profile, std::move(reduced), std::move(pub)};
}

SharedSecret key_agreement(EciesProfile profile,
                           std::span<const std::uint8_t> private_key,
                           std::span<const std::uint8_t> peer_public_key) {
    check_key_len(profile, private_key, private_key_len(profile), "private key");
    check_key_len(profile, peer_public_key, public_key_len(profile),
                  "peer public key");
    return profile == EciesProfile::A ? x25519_agree(private_key, peer_public_key)
                                      : p256_agree(private_key, peer_public_key);
}

Bytes kdf(const SharedSecret& shared,
          std::span<const std::uint8_t> ephemeral_public_key,
          std::size_t out_len) {
    Bytes out;
    out.reserve(out_len + 31);
    Bytes block(shared.secret.begin(), shared.secret.end());
    block.resize(32 + 4 + ephemeral_public_key.size());
    std::copy(ephemeral_public_key.begin(), ephemeral_public_key.end(),
              block.begin() + 36);
    for (std::uint32_t counter = 1; out.size() < out_len; ++counter) {
        block[32] = static_cast<std::uint8_t>(counter >> 24);
        block[33] = static_cast<std::uint8_t>(counter >> 16);
        block[34] = static_cast<std::uint8_t>(counter >> 8);
        block[35] = static_cast<std::uint8_t>(counter);
        Bytes digest = sha256(block);
        out.insert(out.end(), digest.begin(), digest.end());
    }
    out.resize(out_len);
    return out;
}

DerivedKeys derive_keys(const SharedSecret& shared,
                        std::span<const std::uint8_t> ephemeral_public_key) {
    Bytes material = kdf(shared, ephemeral_public_key, 64);
    DerivedKeys keys;
    std::copy(material.begin(), material.begin() + 16, keys.enc_key.begin());
    std::copy(material.begin() + 16, material.begin() + 32,
              keys.initial_counter_block.begin());
    std::copy(material.begin() + 32, material.end(), keys.mac_key.begin());
    return keys;
}

EciesEnvelope conceal(EciesProfile profile,
                      std::span<const std::uint8_t> hn_public_key,
                      std::span<const std::uint8_t> plaintext,
                      RandomSource& rng) {
    Bytes eph_priv(private_key_len(profile));
    rng(eph_priv);
    return conceal_with_ephemeral(profile, hn_public_key, plaintext, eph_priv);
}

EciesEnvelope conceal_with_ephemeral(EciesProfile profile,
                                     std::span<const std::uint8_t> hn_public_key,
                                     std::span<const std::uint8_t> plaintext,
                                     std::span<const std::uint8_t> ephemeral_private_key) {
    if (plaintext.empty())
        throw Error("conceal requires a non-empty plaintext");
    HomeNetworkKeyPair eph = keypair_from_private(profile, ephemeral_private_key);
    SharedSecret shared = key_agreement(profile, eph.private_key, hn_public_key);
    DerivedKeys keys = derive_keys(shared, eph.public_key);
    EciesEnvelope env;
    env.ephemeral_public_key = eph.public_key;
    env.ciphertext = aes128_ctr(keys.enc_key, keys.initial_counter_block,
                                plaintext);
    Bytes tag = hmac_sha256(keys.mac_key, env.ciphertext);
    env.mac.assign(tag.begin(), tag.begin() + kMacLen);
    return env;
}

Bytes deconceal(EciesProfile profile,
                std::span<const std::uint8_t> hn_private_key,
                std::span<const std::uint8_t> ephemeral_public_key,
                std::span<const std::uint8_t> ciphertext,
                std::span<const std::uint8_t> mac) {
    if (mac.size() != kMacLen)
        throw IntegrityFailure("MAC must be 8 octets");
    SharedSecret shared =
        key_agreement(profile, hn_private_key, ephemeral_public_key);
    DerivedKeys keys = derive_keys(shared, ephemeral_public_key);
    Bytes tag = hmac_sha256(keys.mac_key, ciphertext);
    if (CRYPTO_memcmp(tag.data(), mac.data(), kMacLen) != 0)
        throw IntegrityFailure("MAC verification failed");
    return aes128_ctr(keys.enc_key, keys.initial_counter_block, ciphertext);
}

void write_key_file(const std::filesystem::path& path, EciesProfile profile,
                    std::span<const std::uint8_t> key) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open key file for writing: " + path.string());
    out << profile_name(profile) << ":" << to_hex(key) << "\n";
    if (!out)
        throw Error("failed writing key file: " + path.string());
}

std::pair<EciesProfile, Bytes> read_key_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open key file: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError("malformed key file line: '" + line + "'");
        EciesProfile profile = profile_from_name(line.substr(0, colon));
        std::string hex = line.substr(colon + 1);
        std::transform(hex.begin(), hex.end(), hex.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        return {profile, from_hex(hex)};
    }
    throw ParseError("key file is empty: " + path.string());
}

} // namespace suci
