#include "stripbound/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "stripbound/error.hpp"

namespace stripbound {

FunctionModel::FunctionModel(std::string name, Evaluator eval, std::vector<ZeroEntry> known_zeros,
                             std::vector<double> features) {
  if (!eval) throw InvalidInput("function model needs an evaluator");
  for (const auto& z : known_zeros) {
    require_finite(z.position, "known zero");
    if (z.position.imag() < 0.0) throw InvalidInput("known zeros must lie in Im >= 0");
    if (!is_valid_count(z.multiplicity)) throw InvalidInput("known zero multiplicity invalid");
  }
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());
  state_ = std::make_shared<const State>(
      State{std::move(name), std::move(eval), std::move(known_zeros), std::move(features)});
}

LogValue FunctionModel::operator()(Complex z) const {
  require_finite(z, "evaluation point");
  LogValue v = state_->eval(z);
  if (std::isnan(v.log_modulus) || v.log_modulus == std::numeric_limits<double>::infinity()) {
    std::ostringstream os;
    os << "model " << state_->name << " is singular at " << z;
    throw EvaluationError(os.str());
  }
  return v;
}

std::vector<ZeroEntry> FunctionModel::strip_zeros() const {
  std::vector<ZeroEntry> out;
  for (const auto& z : state_->zeros) {
    if (z.position.imag() > 0.0 && z.position.imag() < 1.0) out.push_back(z);
  }
  return out;
}

FunctionModel operator*(const FunctionModel& a, const FunctionModel& b) {
  std::vector<ZeroEntry> zeros = a.known_zeros();
  zeros.insert(zeros.end(), b.known_zeros().begin(), b.known_zeros().end());
  std::vector<double> features = a.features();
  features.insert(features.end(), b.features().begin(), b.features().end());
  return FunctionModel(
      a.name() + "*" + b.name(), [a, b](Complex z) { return a.state_->eval(z) * b.state_->eval(z); },
      std::move(zeros), std::move(features));
}

FunctionModel FunctionModel::constant(Complex c) {
  require_finite(c, "constant");
  std::ostringstream os;
  os << "const(" << c.real() << "," << c.imag() << ")";
  const LogValue v = LogValue::of(c);
  return FunctionModel(os.str(), [v](Complex) { return v; });
}

FunctionModel FunctionModel::exp_linear(double a) {
  require_finite(a, "exponential rate");
  std::ostringstream os;
  os << "exp(i*" << a << "*z)";
  return FunctionModel(os.str(), [a](Complex z) {
    return LogValue{-a * z.imag(), wrap_phase(a * z.real())};
  });
}

FunctionModel FunctionModel::rational(Complex scale, std::vector<Complex> zeros,
                                      std::vector<Complex> poles) {
  require_finite(scale, "rational scale");
  for (auto z : zeros) require_finite(z, "rational zero");
  for (auto p : poles) require_finite(p, "rational pole");
  std::vector<ZeroEntry> known;
  std::vector<double> features;
  for (auto z : zeros) {
    if (z.imag() >= 0.0) known.push_back({z, 1.0});
    features.push_back(z.real());
  }
  for (auto p : poles) features.push_back(p.real());
  std::ostringstream os;
  os << "rational[" << zeros.size() << "/" << poles.size() << "]";
  return FunctionModel(
      os.str(),
      [scale, zeros = std::move(zeros), poles = std::move(poles)](Complex z) {
        LogValue v = LogValue::of(scale);
        for (auto w : zeros) v = v * LogValue::of(z - w);
        for (auto p : poles) {
          const LogValue d = LogValue::of(z - p);
          v = v * LogValue{-d.log_modulus, -d.phase};
        }
        return v;
      },
      std::move(known), std::move(features));
}

FunctionModel FunctionModel::inverse_shifted_power(double c, int m) {
  if (!(std::isfinite(c) && c > 0.0)) throw InvalidInput("normalizing constant must be > 0");
  if (m < 0) throw InvalidInput("normalizing power must be >= 0");
  std::ostringstream os;
  os << "1/(" << c << "(z+i)^" << m << ")";
  return FunctionModel(os.str(), [c, m](Complex z) {
    const LogValue shift = LogValue::of(z + Complex{0.0, 1.0});
    return LogValue{-std::log(c) - m * shift.log_modulus, wrap_phase(-m * shift.phase)};
  });
}

}  // namespace stripbound
