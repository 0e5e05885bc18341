#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "stripbound/core.hpp"

namespace stripbound {

/// Evaluable holomorphic function on the closed upper half-plane, evaluated
/// in log-polar form so products with huge exponents neither underflow nor
/// overflow. A model also carries the zeros it knows about in Im >= 0;
/// pointwise products concatenate them.
class FunctionModel {
 public:
  using Evaluator = std::function<LogValue(Complex)>;

  FunctionModel(std::string name, Evaluator eval, std::vector<ZeroEntry> known_zeros = {},
                std::vector<double> features = {});

  /// Throws InvalidInput for non-finite z and EvaluationError at poles.
  LogValue operator()(Complex z) const;
  double log_modulus(Complex z) const { return (*this)(z).log_modulus; }

  const std::string& name() const { return state_->name; }
  const std::vector<ZeroEntry>& known_zeros() const { return state_->zeros; }
  /// Real abscissae where the model changes quickly (zeros, nodes); used as
  /// quadrature breakpoints.
  const std::vector<double>& features() const { return state_->features; }

  /// Known zeros with 0 < Im < 1.
  std::vector<ZeroEntry> strip_zeros() const;

  friend FunctionModel operator*(const FunctionModel& a, const FunctionModel& b);

  /// f == c.
  static FunctionModel constant(Complex c);
  /// e^{i a z}; |.| = e^{-a Im z}.
  static FunctionModel exp_linear(double a);
  /// scale * prod (z - zero_j) / prod (z - pole_j). Zeros in Im >= 0 are
  /// recorded as known zeros.
  static FunctionModel rational(Complex scale, std::vector<Complex> zeros, std::vector<Complex> poles);
  /// 1 / (c (z + i)^m): the zero-free normalizing divisor.
  static FunctionModel inverse_shifted_power(double c, int m);

 private:
  struct State {
    std::string name;
    Evaluator eval;
    std::vector<ZeroEntry> zeros;
    std::vector<double> features;
  };
  std::shared_ptr<const State> state_;
};

}  // namespace stripbound
