#ifndef SUCI_IDENTIFIERS_HPP
#define SUCI_IDENTIFIERS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "suci/hex.hpp"

namespace suci {

/// Mobile Country Code + Mobile Network Code pair. Both fields are kept as
/// digit strings because leading zeros are significant ("01" != "1").
class Plmn {
public:
    Plmn(std::string mcc, std::string mnc);

    const std::string& mcc() const { return mcc_; }
    const std::string& mnc() const { return mnc_; }

    bool operator==(const Plmn&) const = default;

private:
    std::string mcc_;
    std::string mnc_;
};

/// Permanent subscriber identity (IMSI-format SUPI): PLMN plus MSIN.
/// Total digit count is 13-15.
class Supi {
public:
    Supi(Plmn plmn, std::string msin);

    const Plmn& plmn() const { return plmn_; }
    const std::string& msin() const { return msin_; }

    bool operator==(const Supi&) const = default;

private:
    Plmn plmn_;
    std::string msin_;
};

/// Scheme output for protection scheme id 0: the MSIN travels as-is.
struct NullOutput {
    std::string msin;
    bool operator==(const NullOutput&) const = default;
};

/// Scheme output for the ECIES schemes: ephemeral key, ciphertext, MAC tag.
struct EciesOutput {
    Bytes ephemeral_public_key; // 32 octets (profile A) or 33 (profile B)
    Bytes ciphertext;           // same length as the TBCD-packed MSIN
    Bytes mac;                  // 8 octets
    bool operator==(const EciesOutput&) const = default;
};

using SchemeOutput = std::variant<NullOutput, EciesOutput>;

inline constexpr int kSchemeNull = 0;
inline constexpr int kSchemeProfileA = 1;
inline constexpr int kSchemeProfileB = 2;

inline constexpr std::size_t kMacLen = 8;

/// Public key length for a protection scheme id; throws UnknownScheme for
/// unassigned ids.
std::size_t scheme_key_len(int protection_scheme_id);

/// Concealed subscriber identity as transmitted in a Registration Request.
/// The PLMN and routing indicator stay in the clear; only the MSIN is inside
/// scheme_output.
class Suci {
public:
    Suci(int supi_format, Plmn plmn, std::string routing_indicator,
         int protection_scheme_id, int home_network_public_key_id,
         SchemeOutput output);

    int supi_format() const { return supi_format_; }
    const Plmn& plmn() const { return plmn_; }
    const std::string& routing_indicator() const { return routing_indicator_; }
    int protection_scheme_id() const { return scheme_id_; }
    int home_network_public_key_id() const { return key_id_; }
    const SchemeOutput& scheme_output() const { return output_; }

    bool operator==(const Suci&) const = default;

private:
    int supi_format_;
    Plmn plmn_;
    std::string routing_indicator_;
    int scheme_id_;
    int key_id_;
    SchemeOutput output_;
};

/// Telephony BCD packing: digit 2k in the low nibble of octet k, digit 2k+1
/// in the high nibble, odd tail padded with 0xF.
Bytes tbcd_encode(std::string_view digits);
std::string tbcd_decode(std::span<const std::uint8_t> packed);

/// Parses "<mcc><mnc>-<msin>". MNC length is disambiguated by the digit
/// count before the hyphen (5 -> 2-digit MNC, 6 -> 3-digit).
Supi parse_supi(std::string_view text);
std::string serialize_supi(const Supi& supi);

/// Single-line dashed presentation form:
///   suci-<format>-<mcc>-<mnc>-<routing>-<scheme>-<keyid>-<payload>
/// where the payload is the MSIN digits for the null scheme and lowercase
/// hex of key||ciphertext||mac for the ECIES schemes.
std::string serialize_suci(const Suci& suci);
Suci parse_suci(std::string_view text);

} // namespace suci

#endif
