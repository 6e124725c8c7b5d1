#include "suci/identifiers.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "suci/errors.hpp"

namespace suci {
namespace {

bool all_digits(std::string_view s) {
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

int parse_small_int(std::string_view s, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !all_digits(s))
        throw ParseError(std::string("invalid ") + what + ": '" +
                         std::string(s) + "'");
    return value;
}

} // namespace

Plmn::Plmn(std::string mcc, std::string mnc)
    : mcc_(std::move(mcc)), mnc_(std::move(mnc)) {
    if (mcc_.size() != 3 || !all_digits(mcc_))
        throw InvalidSupi("MCC must be exactly 3 digits");
    if ((mnc_.size() != 2 && mnc_.size() != 3) || !all_digits(mnc_))
        throw InvalidSupi("MNC must be 2 or 3 digits");
}

Supi::Supi(Plmn plmn, std::string msin)
    : plmn_(std::move(plmn)), msin_(std::move(msin)) {
    if (msin_.size() < 9 || msin_.size() > 10 || !all_digits(msin_))
        throw InvalidSupi("MSIN must be 9 or 10 digits");
    std::size_t total = plmn_.mcc().size() + plmn_.mnc().size() + msin_.size();
    if (total < 13 || total > 15)
        throw InvalidSupi("IMSI must be 13-15 digits total");
}

std::size_t scheme_key_len(int protection_scheme_id) {
    switch (protection_scheme_id) {
    case kSchemeProfileA: return 32;
    case kSchemeProfileB: return 33;
    default:
        throw UnknownScheme("no key length for scheme id " +
                            std::to_string(protection_scheme_id));
    }
}

Suci::Suci(int supi_format, Plmn plmn, std::string routing_indicator,
           int protection_scheme_id, int home_network_public_key_id,
           SchemeOutput output)
    : supi_format_(supi_format), plmn_(std::move(plmn)),
      routing_indicator_(std::move(routing_indicator)),
      scheme_id_(protection_scheme_id), key_id_(home_network_public_key_id),
      output_(std::move(output)) {
    if (routing_indicator_.empty() || routing_indicator_.size() > 4 ||
        !all_digits(routing_indicator_))
        throw ParseError("routing indicator must be 1-4 digits");
    if (key_id_ < 0 || key_id_ > 255)
        throw ParseError("home network public key id must be 0-255");
    if (scheme_id_ == kSchemeNull) {
        if (!std::holds_alternative<NullOutput>(output_))
            throw UnknownScheme("null scheme requires a null output");
    } else {
        std::size_t key_len = scheme_key_len(scheme_id_);
        const auto* ecies = std::get_if<EciesOutput>(&output_);
        if (!ecies)
            throw UnknownScheme("ECIES scheme requires an ECIES output");
        if (ecies->ephemeral_public_key.size() != key_len)
            throw TruncatedOutput("ephemeral key length does not match profile");
        if (ecies->mac.size() != kMacLen)
            throw TruncatedOutput("MAC must be 8 octets");
        if (ecies->ciphertext.empty())
            throw TruncatedOutput("empty ciphertext");
    }
}

Bytes tbcd_encode(std::string_view digits) {
    if (digits.empty())
        throw InvalidDigit("empty digit string");
    if (!all_digits(digits))
        throw InvalidDigit("non-digit character in TBCD input");
    Bytes out;
    out.reserve((digits.size() + 1) / 2);
    for (std::size_t i = 0; i < digits.size(); i += 2) {
        std::uint8_t lo = static_cast<std::uint8_t>(digits[i] - '0');
        std::uint8_t hi = (i + 1 < digits.size())
                              ? static_cast<std::uint8_t>(digits[i + 1] - '0')
                              : 0x0F;
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

std::string tbcd_decode(std::span<const std::uint8_t> packed) {
    if (packed.empty())
        throw MalformedTbcd("empty TBCD string");
    std::string out;
    out.reserve(packed.size() * 2);
    for (std::size_t i = 0; i < packed.size(); ++i) {
        std::uint8_t lo = packed[i] & 0x0F;
        std::uint8_t hi = packed[i] >> 4;
        if (lo > 9)
            throw MalformedTbcd("low nibble is not a digit");
        out.push_back(static_cast<char>('0' + lo));
        if (hi == 0x0F) {
            if (i + 1 != packed.size())
                throw MalformedTbcd("pad nibble before final octet");
        } else if (hi > 9) {
            throw MalformedTbcd("high nibble is not a digit");
        } else {
            out.push_back(static_cast<char>('0' + hi));
        }
    }
    return out;
}

Supi parse_supi(std::string_view text) {
    auto hyphen = text.find('-');
    if (hyphen == std::string_view::npos)
        throw InvalidSupi("missing hyphen in SUPI");
    std::string_view plmn = text.substr(0, hyphen);
    std::string_view msin = text.substr(hyphen + 1);
    if (plmn.size() != 5 && plmn.size() != 6)
        throw InvalidSupi("PLMN part must be 5 or 6 digits");
    if (!all_digits(plmn) || !all_digits(msin))
        throw InvalidSupi("non-digit character in SUPI");
    std::size_t mnc_len = plmn.size() - 3;
    return Supi(Plmn(std::string(plmn.substr(0, 3)),
                     std::string(plmn.substr(3, mnc_len))),
                std::string(msin));
}

std::string serialize_supi(const Supi& supi) {
    return supi.plmn().mcc() + supi.plmn().mnc() + "-" + supi.msin();
}

std::string serialize_suci(const Suci& suci) {
    std::string out = "suci-" + std::to_string(suci.supi_format()) + "-" +
                      suci.plmn().mcc() + "-" + suci.plmn().mnc() + "-" +
                      suci.routing_indicator() + "-" +
                      std::to_string(suci.protection_scheme_id()) + "-" +
                      std::to_string(suci.home_network_public_key_id()) + "-";
    if (const auto* null = std::get_if<NullOutput>(&suci.scheme_output())) {
        out += null->msin;
    } else {
        const auto& ecies = std::get<EciesOutput>(suci.scheme_output());
        out += to_hex(ecies.ephemeral_public_key);
        out += to_hex(ecies.ciphertext);
        out += to_hex(ecies.mac);
    }
    return out;
}

Suci parse_suci(std::string_view text) {
    // suci-<format>-<mcc>-<mnc>-<routing>-<scheme>-<keyid>-<payload>
    std::array<std::string_view, 8> part;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < 7; ++i) {
        auto dash = text.find('-', begin);
        if (dash == std::string_view::npos)
            throw ParseError("SUCI has too few fields");
        part[i] = text.substr(begin, dash - begin);
        begin = dash + 1;
    }
    part[7] = text.substr(begin);
    if (part[0] != "suci")
        throw ParseError("SUCI must start with 'suci-'");

    int format = parse_small_int(part[1], "SUPI format");
    Plmn plmn{std::string(part[2]), std::string(part[3])};
    std::string routing(part[4]);
    int scheme = parse_small_int(part[5], "scheme id");
    int key_id = parse_small_int(part[6], "key id");
    std::string_view payload = part[7];

    if (scheme == kSchemeNull)
        return Suci(format, std::move(plmn), std::move(routing), scheme, key_id,
                    NullOutput{std::string(payload)});

    std::size_t key_len = scheme_key_len(scheme); // throws UnknownScheme
    Bytes raw;
    try {
        std::string lowered(payload);
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        raw = from_hex(lowered);
    } catch (const ParseError&) {
        throw ParseError("SUCI scheme output is not valid hex");
    }
    if (raw.size() < key_len + 1 + kMacLen)
        throw TruncatedOutput("SUCI scheme output shorter than minimum");
    EciesOutput out;
    out.ephemeral_public_key.assign(raw.begin(), raw.begin() + key_len);
    out.ciphertext.assign(raw.begin() + key_len, raw.end() - kMacLen);
    out.mac.assign(raw.end() - kMacLen, raw.end());
    return Suci(format, std::move(plmn), std::move(routing), scheme, key_id,
                std::move(out));
}

} // namespace suci
