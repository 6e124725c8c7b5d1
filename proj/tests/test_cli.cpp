#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "test_util.hpp"

#ifndef SUCI_CLI_PATH
#define SUCI_CLI_PATH "suci"
#endif

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string output; // stdout only
};

CmdResult run(const std::string& args) {
    std::string cmd = std::string(SUCI_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult result;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        result.output.append(buf.data(), n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string strip(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r'))
        s.pop_back();
    return s;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("keygen writes key files and prints the public key") {
    auto prefix = temp_file("cli_keys");
    CmdResult a = run("keygen --profile profile-a --out " + prefix.string());
    CHECK(a.exit_code == 0);
    CHECK(strip(a.output).size() == 64); // 32 octets of hex
    CHECK(std::filesystem::exists(prefix.string() + ".pub"));
    CHECK(std::filesystem::exists(prefix.string() + ".priv"));

    CmdResult b = run("keygen --profile profile-b --out " + prefix.string());
    CHECK(b.exit_code == 0);
    CHECK(strip(b.output).size() == 66); // 33 octets compressed

    CmdResult again = run("keygen --profile profile-a --out " + prefix.string());
    CHECK(strip(again.output) != strip(a.output));
    std::filesystem::remove(prefix.string() + ".pub");
    std::filesystem::remove(prefix.string() + ".priv");
}

TEST_CASE("conceal with a null policy emits the null SUCI") {
    auto policy = temp_file("null.policy");
    {
        std::ofstream out(policy);
        out << "suci_enabled = true\nscheme = null\n";
    }
    CmdResult r = run("conceal 24201-534567890 --policy " + policy.string());
    CHECK(r.exit_code == 0);
    CHECK(strip(r.output) == "suci-0-242-01-0000-0-0-534567890");
    std::filesystem::remove(policy);
}

TEST_CASE("conceal/deconceal pipeline is the identity") {
    std::string policy = test_util::scenario_path("suci-a.policy");
    std::string key = test_util::scenario_path("hn-a.priv");
    CmdResult concealed = run("conceal 24201-534567890 --policy " + policy);
    REQUIRE(concealed.exit_code == 0);
    CmdResult recovered =
        run("deconceal " + strip(concealed.output) + " --key " + key);
    CHECK(recovered.exit_code == 0);
    CHECK(strip(recovered.output) == "24201-534567890");
}

TEST_CASE("fixed-ephemeral flag reproduces the golden vector") {
    std::string policy = test_util::scenario_path("suci-a.policy");
    CmdResult a = run("conceal 24201-534567890 --policy " + policy +
                      " --insecure-fixed-ephemeral");
    CmdResult b = run("conceal 24201-534567890 --policy " + policy +
                      " --insecure-fixed-ephemeral");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    auto records = test_util::load_records(
        test_util::data_path("golden_profile_a.txt"));
    std::string expected = "suci-0-242-01-0000-1-0-" +
                           records.at("ephemeral_public") +
                           records.at("ciphertext") + records.at("mac");
    CHECK(strip(a.output) == expected);
}

TEST_CASE("invalid SUPI is a usage error (exit 2)") {
    std::string policy = test_util::scenario_path("suci-a.policy");
    CmdResult r = run("conceal not-a-supi --policy " + policy);
    CHECK(r.exit_code == 2);
    CHECK(r.output.empty());
}

TEST_CASE("tampered SUCI is a domain error (exit 1, no output)") {
    std::string policy = test_util::scenario_path("suci-a.policy");
    std::string key = test_util::scenario_path("hn-a.priv");
    CmdResult concealed = run("conceal 24201-534567890 --policy " + policy);
    std::string text = strip(concealed.output);
    // flip the last hex digit of the MAC
    text.back() = text.back() == '0' ? '1' : '0';
    CmdResult r = run("deconceal " + text + " --key " + key);
    CHECK(r.exit_code == 1);
    CHECK(r.output.empty());
}

TEST_CASE("wrong key id is a domain error") {
    std::string key = test_util::scenario_path("hn-a.priv");
    std::string policy = test_util::scenario_path("suci-a.policy");
    CmdResult concealed = run("conceal 24201-534567890 --policy " + policy);
    CmdResult r = run("deconceal " + strip(concealed.output) + " --key " + key +
                      " --key-id 7");
    CHECK(r.exit_code == 1);
}

TEST_CASE("curve subcommand emits the 79 affine F89 points as CSV") {
    CmdResult r = run("curve");
    CHECK(r.exit_code == 0);
    int lines = 0;
    for (char c : r.output)
        if (c == '\n')
            ++lines;
    CHECK(lines == 79);
    CHECK(r.output.find("0,0\n") == 0);
}

TEST_CASE("sim runs bundled scenarios and is byte-deterministic") {
    std::string scenario = test_util::scenario_path("legacy.scenario");
    auto trace1 = temp_file("trace1.txt");
    auto trace2 = temp_file("trace2.txt");
    CmdResult a = run("sim " + scenario + " --trace " + trace1.string());
    CmdResult b = run("sim " + scenario + " --trace " + trace2.string());
    CHECK(a.exit_code == 0);
    CHECK(a.output.find("captured 24201-534567890") != std::string::npos);

    std::ifstream f1(trace1), f2(trace2);
    std::string c1((std::istreambuf_iterator<char>(f1)),
                   std::istreambuf_iterator<char>());
    std::string c2((std::istreambuf_iterator<char>(f2)),
                   std::istreambuf_iterator<char>());
    CHECK(c1 == c2);
    CHECK_FALSE(c1.empty());
    std::filesystem::remove(trace1);
    std::filesystem::remove(trace2);

    CmdResult suci = run("sim " + test_util::scenario_path("suci-a.scenario"));
    CHECK(suci.exit_code == 0);
    CHECK(suci.output.find("identifying=0") != std::string::npos);
    CHECK(suci.output.find("534567890") == std::string::npos);
}

TEST_CASE("malformed scenario is a usage error") {
    auto path = temp_file("broken.scenario");
    {
        std::ofstream out(path);
        out << "garbage line without equals\n";
    }
    CmdResult r = run("sim " + path.string());
    CHECK(r.exit_code == 2);
    std::filesystem::remove(path);
}

TEST_CASE("unknown subcommand is a usage error") {
    CmdResult r = run("frobnicate");
    CHECK(r.exit_code == 2);
}
