#pragma once

#include <stdexcept>
#include <string>

namespace stripbound {

/// Failure category. The CLI maps each kind onto a fixed exit code.
enum class ErrorKind {
  kInvalidInput,  // malformed or out-of-domain arguments
  kConstruction,  // a counterexample construction could not be completed
  kEvaluation,    // numerical evaluation failed (pole, quadrature, divergence)
  kHypothesis,    // an input violates a hypothesis the bound relies on
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::kInvalidInput, what) {}
};

class ConstructionError : public Error {
 public:
  explicit ConstructionError(const std::string& what) : Error(ErrorKind::kConstruction, what) {}
};

class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& what) : Error(ErrorKind::kEvaluation, what) {}
};

class HypothesisViolation : public Error {
 public:
  explicit HypothesisViolation(const std::string& what) : Error(ErrorKind::kHypothesis, what) {}
};

}  // namespace stripbound
