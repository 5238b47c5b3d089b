#include "flowfactory/error.hpp"

namespace flowfactory {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::BoundaryCoin: return "BoundaryCoin";
    case ErrorCode::NotInPolytope: return "NotInPolytope";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NoArborescence: return "NoArborescence";
    case ErrorCode::MaxRestartsExceeded: return "MaxRestartsExceeded";
    case ErrorCode::TooLargeForOracle: return "TooLargeForOracle";
    case ErrorCode::AmbiguousDecomposition: return "AmbiguousDecomposition";
    case ErrorCode::EmptyPolytope: return "EmptyPolytope";
    case ErrorCode::NotCirculation: return "NotCirculation";
    case ErrorCode::NotZLS: return "NotZLS";
    case ErrorCode::CoefficientsNotSubunit: return "CoefficientsNotSubunit";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::IdentityViolated: return "IdentityViolated";
  }
  return "Unknown";
}

}  // namespace flowfactory
