#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semisep {

enum class Errc {
  EmptyInstance,
  NonPositiveUpper,
  LowerExceedsUpper,
  NegativeLower,
  NonFinite,
  DomainError,
  NoSignChange,
  ShapeMismatch,
  OutOfSupport,
  DegenerateInstance,
  IrViolation,
  OverlappingBundles,
  UncoveredItem,
  InvalidIndex,
  BundleSumOutOfRange,
  TooLarge,
  NoPartitionExists,
  ParseError,
  InternalError,
};

std::string_view to_string(Errc code) noexcept;

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace semisep
