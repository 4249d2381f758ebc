#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace armsp {

enum class ErrorCode {
  InvalidInput,
  DegenerateClustering,
  OutOfBounds,
  GenerationFailed,
  InvalidRoute,
  InvalidSpline,
  InvalidEndpoint,
  InsufficientPopulation,
  NoRoute,
  ConfigError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DegenerateClustering: return "DegenerateClustering";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::InvalidRoute: return "InvalidRoute";
    case ErrorCode::InvalidSpline: return "InvalidSpline";
    case ErrorCode::InvalidEndpoint: return "InvalidEndpoint";
    case ErrorCode::InsufficientPopulation: return "InsufficientPopulation";
    case ErrorCode::NoRoute: return "NoRoute";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace armsp
