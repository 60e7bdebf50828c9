#include "ghkit/errors.hpp"

#include <cstdio>

namespace ghkit {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::NonFiniteEntry: return "NonFiniteEntry";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::NonzeroDiagonal: return "NonzeroDiagonal";
    case Errc::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case Errc::TriangleViolation: return "TriangleViolation";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NonpositiveLambda: return "NonpositiveLambda";
    case Errc::EmptyRelation: return "EmptyRelation";
    case Errc::EmptyImage: return "EmptyImage";
    case Errc::NotACorrespondence: return "NotACorrespondence";
    case Errc::SizeCapExceeded: return "SizeCapExceeded";
    case Errc::InvalidFamily: return "InvalidFamily";
    case Errc::EmptyFamilyList: return "EmptyFamilyList";
    case Errc::NotDisjoint: return "NotDisjoint";
    case Errc::NotCovering: return "NotCovering";
    case Errc::TooManyFamilies: return "TooManyFamilies";
    case Errc::TrivialStabilizer: return "TrivialStabilizer";
    case Errc::UnknownModel: return "UnknownModel";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::InvalidWindow: return "InvalidWindow";
    case Errc::TooManyPoints: return "TooManyPoints";
    case Errc::NonIntegerPoint: return "NonIntegerPoint";
    case Errc::DeltaNotDividingOne: return "DeltaNotDividingOne";
    case Errc::HTooSmall: return "HTooSmall";
    case Errc::LTooSmall: return "LTooSmall";
    case Errc::NonEuclideanAmbient: return "NonEuclideanAmbient";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_gate_error(Errc code) noexcept {
  return code == Errc::TooManyFamilies || code == Errc::TrivialStabilizer;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ghkit
