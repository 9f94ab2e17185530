#pragma once

#include <stdexcept>
#include <string>

namespace hylambda {

// Every failure mode the library reports deliberately.  Input problems
// (bad JSON, wrong counts, out-of-range indices) and numerical problems
// (loss of positivity, non-convergence) are kept apart so the CLI can map
// them to distinct exit codes.
enum class ErrorKind {
    NotSymmetric,
    NotPositiveDefinite,
    SingularDenominator,
    PrecisionExhausted,
    IndexOutOfRange,
    DuplicateRoot,
    WrongCount,
    DegenerateMap,
    IllConditioned,
    QuadratureNotConverged,
    MissingConstant,
    DegenerateFit,
    OrderingNotRealizable,
    ParseError,
    InvalidArgument,
};

const char* to_string(ErrorKind k);

// True for the kinds caused by bad input rather than numerical breakdown.
bool is_input_error(ErrorKind k);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::SingularDenominator: return "SingularDenominator";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::DuplicateRoot: return "DuplicateRoot";
        case ErrorKind::WrongCount: return "WrongCount";
        case ErrorKind::DegenerateMap: return "DegenerateMap";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
        case ErrorKind::MissingConstant: return "MissingConstant";
        case ErrorKind::DegenerateFit: return "DegenerateFit";
        case ErrorKind::OrderingNotRealizable: return "OrderingNotRealizable";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

inline bool is_input_error(ErrorKind k) {
    switch (k) {
        case ErrorKind::IndexOutOfRange:
        case ErrorKind::DuplicateRoot:
        case ErrorKind::WrongCount:
        case ErrorKind::DegenerateMap:
        case ErrorKind::MissingConstant:
        case ErrorKind::OrderingNotRealizable:
        case ErrorKind::ParseError:
        case ErrorKind::InvalidArgument:
            return true;
        default:
            return false;
    }
}

}  // namespace hylambda
