#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ghkit {

enum class Errc {
  NotSquare,
  NonFiniteEntry,
  NotSymmetric,
  NegativeEntry,
  NonzeroDiagonal,
  ZeroOffDiagonal,
  TriangleViolation,
  DuplicatePoint,
  EmptySubset,
  IndexOutOfRange,
  NonpositiveLambda,
  EmptyRelation,
  EmptyImage,
  NotACorrespondence,
  SizeCapExceeded,
  InvalidFamily,
  EmptyFamilyList,
  NotDisjoint,
  NotCovering,
  TooManyFamilies,
  TrivialStabilizer,
  UnknownModel,
  EmptyWindow,
  InvalidWindow,
  TooManyPoints,
  NonIntegerPoint,
  DeltaNotDividingOne,
  HTooSmall,
  LTooSmall,
  NonEuclideanAmbient,
  InvalidArgument,
  ParseError,
};

std::string_view errc_name(Errc code) noexcept;

// Lower-bound gate failures are reported separately from plain validation errors.
bool is_gate_error(Errc code) noexcept;

// Seventeen significant digits: enough to round-trip any double.
std::string fmt17(double v);

/// Error raised by every ghkit operation.
///
/// `witness` carries the offending indices (pair, triple, family/member ids or
/// uncovered points) and `value` an associated measurement (a gap, a
/// distance excess) when the error has one.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(Errc code, const std::string& message,
                std::vector<std::size_t> witness = {}, double value = 0.0)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        witness_(std::move(witness)),
        value_(value) {}

  Errc code() const noexcept { return code_; }
  const std::vector<std::size_t>& witness() const noexcept { return witness_; }
  double value() const noexcept { return value_; }

 private:
  Errc code_;
  std::vector<std::size_t> witness_;
  double value_;
};

}  // namespace ghkit
