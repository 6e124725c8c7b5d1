#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "suci/errors.hpp"
#include "suci/protection.hpp"
#include "test_util.hpp"

using namespace suci;

namespace {

struct Fixture {
    HomeNetworkKeyPair hn;
    OperatorPolicy policy;
    KeyStore store;

    explicit Fixture(EciesProfile profile, std::uint64_t seed = 77) {
        auto rng = seeded_random(seed);
        hn = generate_keypair(profile, rng);
        policy.suci_enabled = true;
        policy.preferred_scheme = profile;
        policy.home_public_key = hn.public_key;
        policy.home_network_public_key_id = 0;
        store.emplace(0, HomeNetworkPrivateKey{profile, hn.private_key});
    }
    Fixture() = default;
};

} // namespace

TEST_CASE("null policy exposes the MSIN") {
    OperatorPolicy policy; // no preferred scheme: null by choice
    auto rng = seeded_random(1);
    Supi supi = parse_supi("24201-534567890");
    ConcealResult result = conceal_supi(supi, policy, rng);
    CHECK(result.suci.protection_scheme_id() == kSchemeNull);
    CHECK_FALSE(result.downgraded);
    CHECK(serialize_suci(result.suci) == "suci-0-242-01-0000-0-0-534567890");
}

TEST_CASE("profile A policy produces the Fig-9 shape") {
    Fixture fx(EciesProfile::A);
    auto rng = seeded_random(2);
    Supi supi = parse_supi("24201-534567890");
    ConcealResult result = conceal_supi(supi, fx.policy, rng);
    CHECK(result.suci.protection_scheme_id() == kSchemeProfileA);
    const auto& out = std::get<EciesOutput>(result.suci.scheme_output());
    CHECK(out.ephemeral_public_key.size() == 32);
    CHECK(out.ciphertext.size() == 5); // TBCD of 9 digits
    CHECK(out.mac.size() == 8);
    CHECK(result.suci.plmn() == supi.plmn());
}

TEST_CASE("missing provisioned key downgrades to null with a flag") {
    Fixture fx(EciesProfile::A);
    fx.policy.home_public_key.reset();
    auto rng = seeded_random(3);
    Supi supi = parse_supi("24201-534567890");
    ConcealResult result = conceal_supi(supi, fx.policy, rng);
    CHECK(result.suci.protection_scheme_id() == kSchemeNull);
    CHECK(result.downgraded);
}

TEST_CASE("disabled concealment downgrades to null with a flag") {
    Fixture fx(EciesProfile::A);
    fx.policy.suci_enabled = false;
    auto rng = seeded_random(4);
    ConcealResult result =
        conceal_supi(parse_supi("24201-534567890"), fx.policy, rng);
    CHECK(result.suci.protection_scheme_id() == kSchemeNull);
    CHECK(result.downgraded);
}

TEST_CASE("downgrade decision is a pure function of policy fields") {
    Fixture fx(EciesProfile::A);
    fx.policy.home_public_key.reset();
    Supi supi = parse_supi("24201-534567890");
    for (int trial = 0; trial < 5; ++trial) {
        auto rng = seeded_random(trial);
        CHECK(conceal_supi(supi, fx.policy, rng).downgraded);
    }
}

TEST_CASE("deconceal_suci inverts conceal_supi for every scheme") {
    std::mt19937_64 seeds(12345);
    std::uniform_int_distribution<int> digit(0, 9);
    std::mt19937 gen(54321);

    Fixture fx_a(EciesProfile::A, 100);
    Fixture fx_b(EciesProfile::B, 101);
    OperatorPolicy null_policy;
    KeyStore empty_store;

    struct Case {
        const OperatorPolicy* policy;
        const KeyStore* store;
    };
    Case cases[] = {{&null_policy, &empty_store},
                    {&fx_a.policy, &fx_a.store},
                    {&fx_b.policy, &fx_b.store}};

    for (int trial = 0; trial < 200; ++trial) {
        std::string mcc, mnc, msin;
        for (int i = 0; i < 3; ++i)
            mcc.push_back(static_cast<char>('0' + digit(gen)));
        int mnc_len = 2 + trial % 2;
        int msin_len = mnc_len == 2 ? 9 + trial % 2 : 9; // total <= 15
        for (int i = 0; i < mnc_len; ++i)
            mnc.push_back(static_cast<char>('0' + digit(gen)));
        for (int i = 0; i < msin_len; ++i)
            msin.push_back(static_cast<char>('0' + digit(gen)));
        Supi supi{Plmn(mcc, mnc), msin};
        for (const auto& c : cases) {
            auto rng = seeded_random(seeds());
            ConcealResult result = conceal_supi(supi, *c.policy, rng);
            CHECK(deconceal_suci(result.suci, *c.store) == supi);
        }
    }
}

TEST_CASE("plaintext-exposure law") {
    Fixture fx(EciesProfile::A);
    OperatorPolicy null_policy;
    Supi supi = parse_supi("24201-534567890");
    auto rng = seeded_random(9);

    std::string null_text =
        serialize_suci(conceal_supi(supi, null_policy, rng).suci);
    CHECK(null_text.find(supi.msin()) != std::string::npos);

    std::string ecies_text =
        serialize_suci(conceal_supi(supi, fx.policy, rng).suci);
    CHECK(ecies_text.find(supi.msin()) == std::string::npos);
}

TEST_CASE("unknown key id") {
    Fixture fx(EciesProfile::A);
    fx.policy.home_network_public_key_id = 7;
    auto rng = seeded_random(10);
    ConcealResult result =
        conceal_supi(parse_supi("24201-534567890"), fx.policy, rng);
    KeyStore store_with_id_0;
    store_with_id_0.emplace(
        0, HomeNetworkPrivateKey{EciesProfile::A, fx.hn.private_key});
    CHECK_THROWS_AS(deconceal_suci(result.suci, store_with_id_0), UnknownKeyId);
}

TEST_CASE("policy file parsing") {
    auto policy = load_policy(test_util::scenario_path("suci-a.policy"));
    CHECK(policy.suci_enabled);
    REQUIRE(policy.preferred_scheme.has_value());
    CHECK(*policy.preferred_scheme == EciesProfile::A);
    CHECK(policy.home_network_public_key_id == 0);
    CHECK(policy.routing_indicator == "0000");
    REQUIRE(policy.home_public_key.has_value());
    CHECK(policy.home_public_key->size() == 32);
}
