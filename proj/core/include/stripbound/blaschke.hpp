#pragma once

// Half-plane Blaschke factors, the convergence-corrected factor
//   B(s, z) = ((z - s - i)/(z - s + i)) ((s - i)/(s + i)) exp(-2iz/(s^2 + 1)),
// truncated products with certified tails, and the two counterexample
// constructions (nodes on Im z = 1 with exponents growing like rho(x) x^p).

#include <optional>
#include <string>
#include <vector>

#include "stripbound/core.hpp"
#include "stripbound/function_model.hpp"

namespace stripbound::blaschke {

/// Constant C in |log B(s, z)| <= C |z|^2 / |s|^3 for |z| <= |s|/2.
inline constexpr double kSmallZConstant = 8.0;

enum class FactorKind { kNormalized, kModified };

std::string to_string(FactorKind kind);
FactorKind factor_kind_from_string(const std::string& s);

struct Node {
  double x = 1.0;         // abscissa: node x + i (normalized) or real t (modified)
  double exponent = 1.0;  // k_n, an integral double
};

/// Declares how the infinite product continues past the stored nodes:
/// abscissae step by at least 1 and k_n / x_n^p <= 2^{-n} + x_n^{-p}.
/// Both constructions emit configs carrying this law.
struct TailLaw {
  double exponent = 2.0;  // p: 2 for normalized, beta + 1 for modified
};

struct ProductConfig {
  FactorKind kind = FactorKind::kNormalized;
  std::vector<Node> nodes;
  std::optional<TailLaw> tail_law;
  /// Provenance of constructed configs (rate name, beta); informational.
  std::string rate_name;
  std::optional<double> beta;

  /// Throws InvalidInput unless x_n >= 1 strictly increasing, k_n valid.
  void validate() const;
  /// Zeros of the stored product: x_n + i with multiplicity k_n.
  ZeroSet zero_set() const;
};

/// (|w^2+1|/(w^2+1)) (z - w)/(z - conj w), Im w > 0, Im z >= 0.
Complex factor_normalized(Complex w, Complex z);
LogValue log_factor_normalized(Complex w, Complex z);

/// B(s, z) for real s and Im z >= 0.
Complex factor_modified(double s, Complex z);
LogValue log_factor_modified(double s, Complex z);

/// The branch of log B(s, .) that vanishes at z = 0, valid for |z| < |s|:
/// log(1 - z/(s+i)) + z/(s+i) - log(1 - z/(s-i)) - z/(s-i).
Complex analytic_log_factor_modified(double s, Complex z);

struct LogFactorBounds {
  std::optional<double> small_z_bound;  // C |z|^2/|s|^3 when |z| <= |s|/2
  double vertical_bound = 0.0;          // 2 Im z/(s^2 + 1) bounds log|B(s, z)|
};

LogFactorBounds log_factor_bounds(double s, Complex z);

struct TailBound {
  double value = 0.0;  // bound on |log| of the omitted factors' modulus
};

struct ProductValue {
  LogValue log_value;
  TailBound tail;
  bool tail_certified = true;

  Complex value() const { return log_value.value(); }
  double modulus() const;
};

/// Truncated product at z with a bound on the omitted tail under the
/// config's tail law. A tail above tail_tol (or outside the law's regime)
/// clears tail_certified without failing.
ProductValue product_eval(const ProductConfig& cfg, Complex z, double tail_tol = 1e-6);

/// Node search settings for the constructions.
struct ConstructOptions {
  double abscissa_cap = 1e15;     // must stay below 2^53 so abscissae are exact
  long long max_scan = 10000000;  // grid evaluations for non-monotone rates
};

/// Nodes x_n = smallest integer >= max(x_{n-1} + 1, 1) with rho(x_n) <= 2^{-n},
/// k_n = ceil(rho(x_n) x_n^2). Throws ConstructionError if no node is found.
ProductConfig construct_prop23(const RateFunction& rho, int n_terms, const ConstructOptions& opt = {});

/// Same selection with exponent beta + 1 and modified factors.
ProductConfig construct_prop25(const RateFunction& rho, double beta, int n_terms,
                               const ConstructOptions& opt = {});

/// G(z) = exp(c (z + i)^beta), principal branch (log(2i) = ln 2 + i pi/2).
Complex growth_multiplier(double c_mult, double beta, Complex z);
LogValue log_growth_multiplier(double c_mult, double beta, Complex z);

/// The stored product as an evaluable model (zeros x_n + i known).
FunctionModel product_model(const ProductConfig& cfg);
FunctionModel multiplier_model(double c_mult, double beta);

/// Smallest c on `c_grid` (ascending) with log|F G_c| <= level at every
/// sample point, where F is the stored product; empty if none qualifies.
std::optional<double> calibrate_multiplier(const ProductConfig& cfg, double beta,
                                           const std::vector<Complex>& samples,
                                           const std::vector<double>& c_grid, double level = 0.0);

}  // namespace stripbound::blaschke
