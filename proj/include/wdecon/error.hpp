#pragma once

#include <stdexcept>
#include <string>

namespace wdecon {

//! Error classes map one-to-one onto CLI exit statuses (see README).
enum class ErrorClass {
  configuration,
  domain,
  ill_posed,
  parse,
  capability,
  range,
  normalization,
  construction,
  insufficient,
  io
};

class Error : public std::runtime_error
{
public:
  Error(ErrorClass cls, const std::string& what)
    : std::runtime_error(what)
    , cls_(cls)
  {}
  ErrorClass error_class() const noexcept { return cls_; }

private:
  ErrorClass cls_;
};

#define WDECON_ERROR_TYPE(Name, cls)                                          \
  struct Name : Error                                                         \
  {                                                                           \
    explicit Name(const std::string& w)                                       \
      : Error(ErrorClass::cls, w)                                             \
    {}                                                                        \
  };

WDECON_ERROR_TYPE(ConfigurationError, configuration)
WDECON_ERROR_TYPE(DomainError, domain)
WDECON_ERROR_TYPE(CapabilityError, capability)
WDECON_ERROR_TYPE(RangeError, range)
WDECON_ERROR_TYPE(NormalizationError, normalization)
WDECON_ERROR_TYPE(ConstructionError, construction)
WDECON_ERROR_TYPE(InsufficiencyError, insufficient)
WDECON_ERROR_TYPE(IoError, io)

#undef WDECON_ERROR_TYPE

//! Raised when |F[phi]| vanishes (or underflows) on the working band.
struct IllPosednessError : Error
{
  IllPosednessError(const std::string& w, double freq, double modulus)
    : Error(ErrorClass::ill_posed, w)
    , frequency(freq)
    , modulus(modulus)
  {}
  double frequency;
  double modulus;
};

struct ParseError : Error
{
  ParseError(const std::string& w, std::size_t line_no)
    : Error(ErrorClass::parse, w)
    , line(line_no)
  {}
  std::size_t line;
};

} // namespace wdecon
