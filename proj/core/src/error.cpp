#include "semisep/error.hpp"

namespace semisep {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyInstance: return "EmptyInstance";
    case Errc::NonPositiveUpper: return "NonPositiveUpper";
    case Errc::LowerExceedsUpper: return "LowerExceedsUpper";
    case Errc::NegativeLower: return "NegativeLower";
    case Errc::NonFinite: return "NonFinite";
    case Errc::DomainError: return "DomainError";
    case Errc::NoSignChange: return "NoSignChange";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::OutOfSupport: return "OutOfSupport";
    case Errc::DegenerateInstance: return "DegenerateInstance";
    case Errc::IrViolation: return "IrViolation";
    case Errc::OverlappingBundles: return "OverlappingBundles";
    case Errc::UncoveredItem: return "UncoveredItem";
    case Errc::InvalidIndex: return "InvalidIndex";
    case Errc::BundleSumOutOfRange: return "BundleSumOutOfRange";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NoPartitionExists: return "NoPartitionExists";
    case Errc::ParseError: return "ParseError";
    case Errc::InternalError: return "InternalError";
  }
  return "Unknown";
}

}  // namespace semisep
