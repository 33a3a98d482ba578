#ifndef PAIRBOUNDS_ERROR_HPP
#define PAIRBOUNDS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairbounds {

enum class Errc {
  BadParams,
  IndexOutOfRange,
  SelfLoop,
  DuplicateEdge,
  EmptyGraph,
  InfeasibleDegree,
  TooManyPairs,
  ParityError,
  DegreeTooLarge,
  SizeMismatch,
  DimMismatch,
  BadGamma,
  BadDelta,
  EmptyDataset,
  Divergence,
  TraceExceedsBound,
  PreconditionMNotBigEnough,
  ConfigError,
  IoError,
  InvariantViolation,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure in the library is reported through this exception; `code()`
/// identifies the failure class so callers (and the CLI exit-code mapping)
/// can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::BadParams: return "BadParams";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::EmptyGraph: return "EmptyGraph";
    case Errc::InfeasibleDegree: return "InfeasibleDegree";
    case Errc::TooManyPairs: return "TooManyPairs";
    case Errc::ParityError: return "ParityError";
    case Errc::DegreeTooLarge: return "DegreeTooLarge";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::BadGamma: return "BadGamma";
    case Errc::BadDelta: return "BadDelta";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::Divergence: return "Divergence";
    case Errc::TraceExceedsBound: return "TraceExceedsBound";
    case Errc::PreconditionMNotBigEnough: return "PreconditionMNotBigEnough";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
    case Errc::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace pairbounds

#endif  // PAIRBOUNDS_ERROR_HPP
