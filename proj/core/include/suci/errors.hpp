#ifndef SUCI_ERRORS_HPP
#define SUCI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace suci {

/// Base class for every domain error raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidDigit : Error { using Error::Error; };
struct MalformedTbcd : Error { using Error::Error; };
struct InvalidSupi : Error { using Error::Error; };
struct UnknownScheme : Error { using Error::Error; };
struct TruncatedOutput : Error { using Error::Error; };

struct DegenerateKey : Error { using Error::Error; };
struct InvalidPoint : Error { using Error::Error; };
struct IntegrityFailure : Error { using Error::Error; };

struct UnknownKeyId : Error { using Error::Error; };
struct CorruptPlaintext : Error { using Error::Error; };

struct TooLarge : Error { using Error::Error; };

struct DegenerateGeometry : Error { using Error::Error; };
struct OutOfModel : Error { using Error::Error; };

struct ParseError : Error { using Error::Error; };

} // namespace suci

#endif
