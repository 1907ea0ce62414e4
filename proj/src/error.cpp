#include "netsis/error.hpp"

namespace netsis {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyGraph: return "EmptyGraph";
        case ErrorCode::NegativeWeight: return "NegativeWeight";
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::ZeroInDegree: return "ZeroInDegree";
        case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
        case ErrorCode::AssumptionTwoViolated: return "AssumptionTwoViolated";
        case ErrorCode::AssumptionThreeViolated: return "AssumptionThreeViolated";
        case ErrorCode::StateOutOfRange: return "StateOutOfRange";
        case ErrorCode::InvalidInterval: return "InvalidInterval";
        case ErrorCode::NotIrreducible: return "NotIrreducible";
        case ErrorCode::NonPositiveVector: return "NonPositiveVector";
        case ErrorCode::RegimeMismatch: return "RegimeMismatch";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DegenerateDelta: return "DegenerateDelta";
        case ErrorCode::BoundViolation: return "BoundViolation";
        case ErrorCode::NonNegativityViolation: return "NonNegativityViolation";
        case ErrorCode::SpectralCertificateFailed: return "SpectralCertificateFailed";
        case ErrorCode::NoPositiveState: return "NoPositiveState";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::EmptyGrid: return "EmptyGrid";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

const char* error_code_module(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyGraph:
        case ErrorCode::NegativeWeight:
        case ErrorCode::MalformedLine:
        case ErrorCode::ZeroInDegree:
            return "graphio";
        case ErrorCode::NotStronglyConnected:
        case ErrorCode::AssumptionTwoViolated:
        case ErrorCode::AssumptionThreeViolated:
        case ErrorCode::StateOutOfRange:
        case ErrorCode::InvalidInterval:
            return "model";
        case ErrorCode::NotIrreducible:
        case ErrorCode::NonPositiveVector:
            return "spectral";
        case ErrorCode::RegimeMismatch:
        case ErrorCode::NoConvergence:
        case ErrorCode::DegenerateDelta:
        case ErrorCode::BoundViolation:
            return "equilibrium";
        case ErrorCode::NonNegativityViolation:
        case ErrorCode::SpectralCertificateFailed:
        case ErrorCode::NoPositiveState:
            return "stability";
        case ErrorCode::ConfigError:
        case ErrorCode::EmptyGrid:
        case ErrorCode::IoError:
            return "cli";
        case ErrorCode::InvalidArgument:
            return "netsis";
    }
    return "netsis";
}

}  // namespace netsis
