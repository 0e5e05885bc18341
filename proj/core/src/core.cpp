#include "stripbound/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "stripbound/error.hpp"

namespace stripbound {

namespace {

std::string format_point(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

bool position_less(const ZeroEntry& a, const ZeroEntry& b) {
  if (a.position.real() != b.position.real()) return a.position.real() < b.position.real();
  return a.position.imag() < b.position.imag();
}

}  // namespace

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InvalidInput(std::string(what) + " must have finite components");
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite");
}

bool is_valid_count(double k) { return std::isfinite(k) && k >= 1.0 && std::floor(k) == k; }

Complex LogValue::value() const {
  if (log_modulus == -std::numeric_limits<double>::infinity()) return {0.0, 0.0};
  return std::polar(std::exp(log_modulus), phase);
}

LogValue LogValue::of(Complex z) {
  if (z == Complex{0.0, 0.0}) return {-std::numeric_limits<double>::infinity(), 0.0};
  return {std::log(std::abs(z)), std::arg(z)};
}

double wrap_phase(double phase) {
  if (!std::isfinite(phase)) return 0.0;
  double w = std::remainder(phase, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

LogValue operator*(LogValue a, LogValue b) {
  return {a.log_modulus + b.log_modulus, wrap_phase(a.phase + b.phase)};
}

LogValue pow(LogValue a, double k) {
  if (k == 1.0) return a;
  // 0^k stays -inf; -inf * k for k > 0 is -inf, which is what we want.
  return {a.log_modulus * k, wrap_phase(a.phase * k)};
}

double ZeroSet::total_multiplicity() const {
  double total = 0.0;
  for (const auto& e : entries_) total += e.multiplicity;
  return total;
}

double ZeroSet::max_multiplicity() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, e.multiplicity);
  return m;
}

ZeroSet ZeroSet::merged_with(const ZeroSet& other) const {
  std::vector<ZeroEntry> raw(entries_.begin(), entries_.end());
  raw.insert(raw.end(), other.entries_.begin(), other.entries_.end());
  return make_zero_set(std::move(raw));
}

ZeroSet make_zero_set(std::vector<ZeroEntry> raw) {
  for (const auto& e : raw) {
    require_finite(e.position, "zero position");
    if (!(e.position.imag() > 0.0)) {
      throw InvalidInput("zero not in open upper half-plane: " + format_point(e.position));
    }
    if (!is_valid_count(e.multiplicity)) {
      throw InvalidInput("multiplicity must be a positive integer at " + format_point(e.position));
    }
  }
  std::stable_sort(raw.begin(), raw.end(), position_less);
  ZeroSet zs;
  for (const auto& e : raw) {
    if (!zs.entries_.empty() && zs.entries_.back().position == e.position) {
      zs.entries_.back().multiplicity += e.multiplicity;
    } else {
      zs.entries_.push_back(e);
    }
  }
  return zs;
}

void GrowthEnvelope::validate() const {
  if (!(std::isfinite(c) && c > 0.0)) throw InvalidInput("growth envelope c must be finite and > 0");
  if (m < 0) throw InvalidInput("growth envelope m must be >= 0");
  if (!(std::isfinite(alpha) && alpha >= 0.0)) {
    throw InvalidInput("growth envelope alpha must be finite and >= 0");
  }
}

double GrowthEnvelope::log_bound(Complex z) const {
  return std::log(c) + m * std::log1p(std::abs(z)) + alpha * z.imag();
}

void BetaEnvelope::validate() const {
  if (!(std::isfinite(c) && c > 0.0)) throw InvalidInput("beta envelope c must be finite and > 0");
  if (!(beta > 1.0 && beta < 2.0)) throw InvalidInput("beta must lie strictly inside (1, 2)");
}

void SeparationParams::validate() const {
  if (!(std::isfinite(k) && k > 0.0)) throw InvalidInput("separation k must be finite and > 0");
  if (!(std::isfinite(c_sep) && c_sep > 0.0)) {
    throw InvalidInput("separation c_sep must be finite and > 0");
  }
  if (!(std::isfinite(d) && d >= 0.0)) throw InvalidInput("separation d must be finite and >= 0");
}

double SeparationParams::threshold(Complex a, Complex b) const {
  return c_sep * std::pow(std::abs(a) + std::abs(b), -0.25);
}

bool SeparationParams::in_sector(Complex a) const { return a.imag() <= k * std::abs(a.real()); }

RateFunction::RateFunction(std::string name, std::function<double(double)> fn, bool non_increasing)
    : name_(std::move(name)), fn_(std::move(fn)), non_increasing_(non_increasing) {
  if (!fn_) throw InvalidInput("rate function must be callable");
}

double RateFunction::operator()(double x) const {
  const double v = fn_(x);
  if (!(std::isfinite(v) && v > 0.0)) {
    std::ostringstream os;
    os << "rate function " << name_ << " is not positive at x = " << x;
    throw InvalidInput(os.str());
  }
  return v;
}

void RateFunction::check_samples(std::span<const double> xs) const {
  double prev = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    const double v = (*this)(x);
    if (non_increasing_ && v > prev) {
      std::ostringstream os;
      os << "rate function " << name_ << " declared non-increasing but increases at x = " << x;
      throw InvalidInput(os.str());
    }
    prev = v;
  }
}

RateFunction RateFunction::reciprocal_linear(double power) {
  if (!(std::isfinite(power) && power > 0.0)) throw InvalidInput("rate power must be > 0");
  std::ostringstream os;
  os << "1/(1+x)";
  if (power != 1.0) os << "^" << power;
  return RateFunction(os.str(), [power](double x) { return std::pow(1.0 + x, -power); }, true);
}

RateFunction RateFunction::reciprocal_log(double power) {
  if (!(std::isfinite(power) && power > 0.0)) throw InvalidInput("rate power must be > 0");
  std::ostringstream os;
  os << "1/(1+log(1+x))";
  if (power != 1.0) os << "^" << power;
  return RateFunction(
      os.str(), [power](double x) { return std::pow(1.0 + std::log1p(x), -power); }, true);
}

RateFunction RateFunction::constant(double value) {
  if (!(std::isfinite(value) && value > 0.0)) throw InvalidInput("constant rate must be finite and > 0");
  std::ostringstream os;
  os << "const:" << value;
  return RateFunction(os.str(), [value](double) { return value; }, true);
}

double blaschke_condition(const ZeroSet& zs) {
  double sum = 0.0;
  for (const auto& e : zs.entries()) {
    sum += e.multiplicity * e.position.imag() / (1.0 + std::norm(e.position));
  }
  return sum;
}

std::vector<SeparationViolation> check_separation(const ZeroSet& zs, const SeparationParams& p) {
  p.validate();
  const auto entries = zs.entries();
  std::vector<std::size_t> sector;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (p.in_sector(entries[i].position)) sector.push_back(i);
  }
  // Entries are sorted by real part. For a violating pair the real-part gap is
  // below c_sep (|l|+|m|)^{-1/4} <= c_sep |l|^{-1/4}, which bounds the scan.
  std::vector<SeparationViolation> out;
  for (std::size_t a = 0; a < sector.size(); ++a) {
    const Complex la = entries[sector[a]].position;
    const double reach = p.c_sep * std::pow(std::abs(la), -0.25);
    for (std::size_t b = a + 1; b < sector.size(); ++b) {
      const Complex lb = entries[sector[b]].position;
      if (lb.real() - la.real() >= reach) break;
      const double dist = std::abs(la - lb);
      const double thr = p.threshold(la, lb);
      if (dist < thr) out.push_back({sector[a], sector[b], dist, thr});
    }
  }
  return out;
}

}  // namespace stripbound
