#include <benchmark/benchmark.h>

#include "suci/ecies.hpp"

namespace {

void BM_Conceal(benchmark::State& state, suci::EciesProfile profile) {
    auto rng = suci::seeded_random(1);
    auto hn = suci::generate_keypair(profile, rng);
    suci::Bytes plaintext = {0x35, 0x54, 0x76, 0x98, 0xF0};
    for (auto _ : state) {
        auto env = suci::conceal(profile, hn.public_key, plaintext, rng);
        benchmark::DoNotOptimize(env);
    }
}

void BM_Deconceal(benchmark::State& state, suci::EciesProfile profile) {
    auto rng = suci::seeded_random(2);
    auto hn = suci::generate_keypair(profile, rng);
    suci::Bytes plaintext = {0x35, 0x54, 0x76, 0x98, 0xF0};
    auto env = suci::conceal(profile, hn.public_key, plaintext, rng);
    for (auto _ : state) {
        auto recovered =
            suci::deconceal(profile, hn.private_key, env.ephemeral_public_key,
                            env.ciphertext, env.mac);
        benchmark::DoNotOptimize(recovered);
    }
}

BENCHMARK_CAPTURE(BM_Conceal, profile_a, suci::EciesProfile::A);
BENCHMARK_CAPTURE(BM_Conceal, profile_b, suci::EciesProfile::B);
BENCHMARK_CAPTURE(BM_Deconceal, profile_a, suci::EciesProfile::A);
BENCHMARK_CAPTURE(BM_Deconceal, profile_b, suci::EciesProfile::B);

} // namespace
