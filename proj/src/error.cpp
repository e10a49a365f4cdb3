#include "multisec/error.hpp"

namespace multisec {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonDecreasingSupport: return "NonDecreasingSupport";
    case Errc::NonPositiveValue: return "NonPositiveValue";
    case Errc::BadPmf: return "BadPmf";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InfeasiblePair: return "InfeasiblePair";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::InstanceTooLarge: return "InstanceTooLarge";
    case Errc::TableMismatch: return "TableMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonMarkovPolicy: return "NonMarkovPolicy";
    case Errc::BadDelta: return "BadDelta";
    case Errc::BadEpsilon: return "BadEpsilon";
    case Errc::BadArgument: return "BadArgument";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace multisec
