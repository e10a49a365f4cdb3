#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace multisec {

enum class Errc {
  NonDecreasingSupport,
  NonPositiveValue,
  BadPmf,
  IndexOutOfRange,
  InfeasiblePair,
  CountMismatch,
  InstanceTooLarge,
  TableMismatch,
  DimensionMismatch,
  NonMarkovPolicy,
  BadDelta,
  BadEpsilon,
  BadArgument,
  ParseError,
};

std::string_view to_string(Errc code) noexcept;

// Every error raised by the library carries one of the codes above so callers
// (CLI, bindings, tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace multisec
