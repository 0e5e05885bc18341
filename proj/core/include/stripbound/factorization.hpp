#pragma once

// Integral machinery on the upper half-plane: Poisson integrals of boundary
// log-moduli, the uniqueness integral along Im z = 1/2, the Harnack step in
// the strip 0 < Im z < 1 and the Carleman functional about the point i/2.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stripbound/core.hpp"
#include "stripbound/function_model.hpp"
#include "stripbound/quadrature.hpp"

namespace stripbound::factorization {

/// Harnack comparison factor for a disk of radius 1/2 at distance 1/4.
inline constexpr double kHarnackConstant = 1.0 / 3.0;

enum class DecayTag { kBounded, kLinear, kPower };

std::string to_string(DecayTag tag);

/// |log|f(t)|| <= coefficient |t|^exponent for |t| >= from_radius. The
/// exponent must stay below 2; Poisson integrability needs it below 1.
struct DecayClass {
  DecayTag tag = DecayTag::kBounded;
  double exponent = 0.0;
  double coefficient = 0.0;
  double from_radius = 0.0;

  static DecayClass bounded(double bound);
  static DecayClass linear(double slope, double from_radius = 0.0);
  static DecayClass power(double coefficient, double exponent, double from_radius = 0.0);

  void validate() const;
  bool poisson_integrable() const { return exponent < 1.0; }
};

/// t -> log|f(t)| on the real line.
struct BoundaryModulus {
  std::string name;
  std::function<double(double)> log_modulus;
  DecayClass decay;
  /// Abscissae where the data has kinks or sharp features.
  std::vector<double> features;

  static BoundaryModulus zero();
  /// Boundary values of a model: t -> log|f(t)|.
  static BoundaryModulus of_model(const FunctionModel& f, DecayClass decay);
};

/// The pieces of f = e^{iaz} B F: the exponential rate, the zero set and the
/// boundary modulus of the outer part.
struct NevanlinnaParts {
  double a = 0.0;
  ZeroSet zeros;
  BoundaryModulus boundary;

  void validate() const;
};

/// (y/pi) int log|f(t)| / ((x - t)^2 + y^2) dt. The window |t - x| <= R is
/// integrated in the angle variable t = x + y tan(theta); the rest is bounded
/// through the decay class (R grows until the bound fits the tolerance).
/// Throws EvaluationError("non-integrable boundary data") when it cannot.
Estimate poisson_outer(const BoundaryModulus& bm, double x, double y, const QuadratureSpec& q);

/// Bound on the Poisson integral of |data| over |t - x| > radius implied
/// by the decay class (radius >= 2|x| and >= 2 from_radius); +inf when the
/// class is not integrable.
double poisson_tail_bound(const DecayClass& decay, double y, double radius);

/// The same kernel restricted to lo <= t <= hi (finite limits), applied to
/// `integrand` instead of the boundary data.
Estimate poisson_window(const std::function<double(double)>& integrand, double x, double y, double lo,
                        double hi, const QuadratureSpec& q, const std::vector<double>& features = {});

/// y -> log(1/|f(y + i/2)|) with optional feature abscissae.
struct LineFunction {
  std::function<double(double)> eval;
  std::vector<double> features;

  static LineFunction log_inverse_modulus(const FunctionModel& f, const QuadratureSpec& q);
};

struct UniquenessResult {
  bool divergent = false;
  Estimate estimate;  // meaningful when !divergent
  std::vector<double> partial_integrals;  // over |y| <= 10^j, j = 1..
};

/// int g(y) dy / (1 + y^2) over the real line.
UniquenessResult uniqueness_integral(const LineFunction& g, const QuadratureSpec& q);

/// Lower bound c1 * v at every point within 1/4 of a midline point where a
/// positive harmonic function on the strip takes the value v.
double harnack_lower(double center_value);

struct CarlemanTerms {
  double radius = 0.0;
  double arc_term = 0.0;
  double boundary_term = 0.0;
  double zero_term = 0.0;
  double residual = 0.0;  // zero_term - arc_term - boundary_term
  double error_estimate = 0.0;
  std::vector<std::string> flags;
};

/// Terms of the Carleman formula on the half-annulus 1 <= |w| <= r,
/// Im w >= 0, w = z - i/2. Zeros of f must be known to the model; a zero on
/// the contour is an EvaluationError.
CarlemanTerms carleman_functional(const FunctionModel& f, double r, const QuadratureSpec& q);

/// (1/r^2) int_{r/3}^{2r/3} log^-|f(x + i/2)| dx / r^{beta - 1}.
Estimate carleman_deficiency(const FunctionModel& f, double r, double beta, const QuadratureSpec& q);

}  // namespace stripbound::factorization
