#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "netsis/types.hpp"

namespace netsis {

enum class ErrorCode {
    // graphio
    EmptyGraph,
    NegativeWeight,
    MalformedLine,
    ZeroInDegree,
    // model
    NotStronglyConnected,
    AssumptionTwoViolated,
    AssumptionThreeViolated,
    StateOutOfRange,
    InvalidInterval,
    // spectral
    NotIrreducible,
    NonPositiveVector,
    // equilibrium
    RegimeMismatch,
    NoConvergence,
    DegenerateDelta,
    BoundViolation,
    // stability
    NonNegativityViolation,
    SpectralCertificateFailed,
    NoPositiveState,
    // cli / config
    ConfigError,
    EmptyGrid,
    IoError,
    // generic precondition failure
    InvalidArgument,
};

[[nodiscard]] const char* error_code_name(ErrorCode code) noexcept;
[[nodiscard]] const char* error_code_module(ErrorCode code) noexcept;

/// Toolkit-wide exception. `qualified_code()` yields a machine-readable
/// "module.Code" string; `node`/`value` carry the offending index and
/// quantity when one exists.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string message,
          std::optional<Index> node = std::nullopt,
          std::optional<double> value = std::nullopt)
        : std::runtime_error(std::move(message)),
          code_(code),
          module_(error_code_module(code)),
          node_(node),
          value_(value) {}

    // Some codes (DegenerateDelta) are shared between modules; the throw
    // site can qualify them explicitly.
    Error(ErrorCode code, const char* module, std::string message,
          std::optional<Index> node = std::nullopt,
          std::optional<double> value = std::nullopt)
        : std::runtime_error(std::move(message)),
          code_(code),
          module_(module),
          node_(node),
          value_(value) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] std::string qualified_code() const {
        return std::string(module_) + "." + error_code_name(code_);
    }
    [[nodiscard]] std::optional<Index> node() const noexcept { return node_; }
    [[nodiscard]] std::optional<double> value() const noexcept { return value_; }

  private:
    ErrorCode code_;
    const char* module_;
    std::optional<Index> node_;
    std::optional<double> value_;
};

}  // namespace netsis
