#pragma once

#include <stdexcept>
#include <string>

namespace qg5 {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Clifford module
struct ConventionInconsistent : Error { using Error::Error; };
struct NotInvertible : Error { using Error::Error; };
struct DispersionViolated : Error { using Error::Error; };

// Symbolic tensor module
struct SingularMetric : Error { using Error::Error; };

// Five-geometry module
struct EvaluationDomain : Error { using Error::Error; };
struct StepLimit : Error { using Error::Error; };

// Spinor map module
struct UnknownSolution : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

// CLI
struct ConfigInvalid : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

}  // namespace qg5
