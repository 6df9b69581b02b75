#ifndef AUTOPHASE2D_ERROR_HPP
#define AUTOPHASE2D_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace autophase2d {

// Every failure the library reports carries one of these names. The CLI maps
// Domain codes to exit status 1 and Config/Io codes to exit status 2.
enum class ErrorCode {
  LengthMismatch,
  NonFiniteValue,
  InvalidOversampling,
  NotAnAutocorrelation,
  AsymmetricInput,
  DegenerateSize,
  ZeroEndpoint,
  RootFindingFailed,
  UnitCircleZero,
  UnpairedComplexZero,
  NonRealCoefficients,
  NonRealResult,
  ResidualExceeded,
  NoMatch,
  NonIntegerInput,
  SearchSpaceTooLarge,
  InvalidConfig,
  IoError,
};

inline std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::InvalidOversampling: return "InvalidOversampling";
    case ErrorCode::NotAnAutocorrelation: return "NotAnAutocorrelation";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::DegenerateSize: return "DegenerateSize";
    case ErrorCode::ZeroEndpoint: return "ZeroEndpoint";
    case ErrorCode::RootFindingFailed: return "RootFindingFailed";
    case ErrorCode::UnitCircleZero: return "UnitCircleZero";
    case ErrorCode::UnpairedComplexZero: return "UnpairedComplexZero";
    case ErrorCode::NonRealCoefficients: return "NonRealCoefficients";
    case ErrorCode::NonRealResult: return "NonRealResult";
    case ErrorCode::ResidualExceeded: return "ResidualExceeded";
    case ErrorCode::NoMatch: return "NoMatch";
    case ErrorCode::NonIntegerInput: return "NonIntegerInput";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

inline bool is_domain_error(ErrorCode code) noexcept {
  return code != ErrorCode::InvalidConfig && code != ErrorCode::IoError;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace autophase2d

#endif  // AUTOPHASE2D_ERROR_HPP
