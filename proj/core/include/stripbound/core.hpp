#pragma once

// Domain types shared by every module: points of the closed upper half-plane,
// zero sets with multiplicities, growth envelopes, separation parameters and
// rate functions, plus the two elementary functionals on zero sets.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace stripbound {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Throws InvalidInput naming `what` unless both components are finite.
void require_finite(Complex z, const char* what);
void require_finite(double v, const char* what);

/// Multiplicities and exponents are integers that may exceed 2^63 (the
/// counterexample constructions produce k ~ 1e25), so they are carried as
/// integral doubles. Valid counts are finite, integral and >= 1.
bool is_valid_count(double k);

/// log z in log-polar form: log|z| and arg z in (-pi, pi]. A zero has
/// log_modulus = -inf. Products are sums; see `operator*`.
struct LogValue {
  double log_modulus = 0.0;
  double phase = 0.0;

  Complex value() const;
  static LogValue of(Complex z);
};

LogValue operator*(LogValue a, LogValue b);
LogValue pow(LogValue a, double k);
double wrap_phase(double phase);

struct ZeroEntry {
  Complex position;
  double multiplicity = 1.0;

  friend bool operator==(const ZeroEntry&, const ZeroEntry&) = default;
};

/// Finite multiset of points in the open upper half-plane. Entries are
/// distinct and sorted by (Re, Im); construct through make_zero_set.
class ZeroSet {
 public:
  ZeroSet() = default;

  std::span<const ZeroEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double total_multiplicity() const;
  double max_multiplicity() const;

  /// Disjoint-or-not union; coinciding positions merge.
  ZeroSet merged_with(const ZeroSet& other) const;

  friend bool operator==(const ZeroSet&, const ZeroSet&) = default;

 private:
  friend ZeroSet make_zero_set(std::vector<ZeroEntry> raw);
  std::vector<ZeroEntry> entries_;
};

/// Validates and canonicalizes raw entries. Duplicate positions merge by
/// summing multiplicities. Throws InvalidInput for Im <= 0, non-finite
/// positions and non-positive or non-integral multiplicities.
ZeroSet make_zero_set(std::vector<ZeroEntry> raw);

/// |f(z)| <= c (1+|z|)^m e^{alpha Im z}.
struct GrowthEnvelope {
  double c = 1.0;
  int m = 0;
  double alpha = 0.0;

  void validate() const;
  double log_bound(Complex z) const;
};

/// |f(z)| <= c e^{|z|^beta}, 1 < beta < 2.
struct BetaEnvelope {
  double c = 1.0;
  double beta = 1.5;

  void validate() const;
};

/// Gap law |l - m| >= c_sep (|l| + |m|)^{-1/4} for zeros in the sector
/// Im <= k |Re|. `d` is the optional uniform gap, carried but not enforced.
struct SeparationParams {
  double k = 1.0;
  double c_sep = 1.0;
  double d = 0.0;

  void validate() const;
  double threshold(Complex a, Complex b) const;
  bool in_sector(Complex a) const;
};

/// Positive rate x -> rho(x) on x >= 0. A declared non-increasing rate lets
/// node searches bisect instead of scanning.
class RateFunction {
 public:
  RateFunction(std::string name, std::function<double(double)> fn, bool non_increasing);

  /// Throws InvalidInput when the value is not finite and positive.
  double operator()(double x) const;
  bool non_increasing() const { return non_increasing_; }
  const std::string& name() const { return name_; }

  /// Checks positivity and, if declared, monotonicity on `xs` (sorted).
  void check_samples(std::span<const double> xs) const;

  static RateFunction reciprocal_linear(double power = 1.0);  // (1+x)^-p
  static RateFunction reciprocal_log(double power = 1.0);     // (1+log(1+x))^-p
  static RateFunction constant(double value);

 private:
  std::string name_;
  std::function<double(double)> fn_;
  bool non_increasing_;
};

/// Sum of mult * Im l / (1 + |l|^2).
double blaschke_condition(const ZeroSet& zs);

struct SeparationViolation {
  std::size_t first;   // index into zs.entries()
  std::size_t second;  // index into zs.entries(), first < second
  double distance;
  double threshold;
};

/// Every pair of distinct sector zeros closer than the gap law allows.
std::vector<SeparationViolation> check_separation(const ZeroSet& zs, const SeparationParams& p);

}  // namespace stripbound
