#pragma once

// Bound checks on the midline Im z = 1/2: growth normalization, ratio
// profiles log|f(x + i/2)| / x^p, the dyadic estimator for separated zero
// sets and the assembled lower bound for f = e^{iaz} B F.

#include <optional>
#include <string>
#include <vector>

#include "stripbound/core.hpp"
#include "stripbound/factorization.hpp"
#include "stripbound/function_model.hpp"
#include "stripbound/quadrature.hpp"

namespace stripbound::certify {

/// Constant K in -log|B(x + i/2)| <= K * sum Im l / ((x - Re l)^2 + Im l^2),
/// valid when every zero has Im l >= 1 (then each Blaschke factor modulus
/// squared a satisfies a >= 1/9 and log(1/a) <= 9 (1 - a)).
inline constexpr double kBlaschkeComparison = 9.0;

/// Relative slack above 1 tolerated before a sample counts as an envelope
/// violation.
inline constexpr double kEnvelopeSlack = 0.10;

struct EnvelopeViolation {
  Complex z;
  double modulus;
};

struct NormalizedModel {
  FunctionModel model;
  GrowthEnvelope envelope;
  std::vector<EnvelopeViolation> violations;  // non-fatal diagnostics
};

/// Sample grid for envelope spot checks.
std::vector<Complex> default_envelope_grid();

/// F = f e^{i alpha z} / (c (z + i)^m). Spot-checks |F| <= 1 on `grid`.
NormalizedModel normalize_growth(const FunctionModel& f, const GrowthEnvelope& env,
                                 const std::vector<Complex>& grid = default_envelope_grid());

struct RatioSample {
  double x = 0.0;
  double log_modulus = 0.0;
  double ratio = 0.0;
};

struct RatioProfile {
  double exponent = 2.0;
  std::vector<RatioSample> samples;
  /// tail_sup[j] = max_{i >= j} |ratio_i|.
  std::vector<double> tail_sup;
  double min_ratio = 0.0;
};

/// log|f(x + i/2)| / x^p for increasing xs >= 1. Evaluation failures are
/// rethrown as EvaluationError naming the offending x.
RatioProfile strip_ratio_profile(const FunctionModel& f, const std::vector<double>& xs, double p);

struct Annulus {
  int n = 0;                      // 2^{n-1} <= |x - l| < 2^n
  std::size_t card = 0;           // distinct zeros
  double multiplicity_count = 0;  // zeros with multiplicity
  double mass = 0.0;              // A_n = sum mult Im l
  double sum = 0.0;               // B_n
};

struct DyadicConstants {
  double c1_card = 0.0;  // max card / (2^{2n} x^{1/2})
  double c1_mass = 0.0;  // max A_n / (2^{3n} x^{1/2})
  double c1 = 0.0;       // max of the two
  double c2 = 0.0;       // sum A_n / (1 + x^2)
  double c3 = 0.0;       // near_sum / x
};

struct DyadicReport {
  double x = 0.0;
  double m = 0.0;  // 1 + 1/k
  std::vector<Annulus> annuli;
  std::size_t far_count = 0;
  std::size_t near_count = 0;
  double far_sum = 0.0;
  double near_sum = 0.0;
  double total = 0.0;
  double max_multiplicity = 0.0;
  DyadicConstants constants;
};

/// Throws HypothesisViolation when a zero has Im < 1 or a sector pair breaks
/// the gap law.
void check_dyadic_hypotheses(const ZeroSet& zs, const SeparationParams& p);

/// sum mult Im l / ((x - Re l)^2 + Im l^2), split into the far part
/// |x - l| >= x/m and dyadic annuli of the near part.
DyadicReport dyadic_estimate(const ZeroSet& zs, double x, const SeparationParams& p);

struct Prop26Bound {
  double x = 0.0;
  double exponential_term = 0.0;  // -a/2
  double outer_inner = 0.0;       // Poisson part over (-2x, 2x), error removed
  double outer_complement = 0.0;  // -log^- part over 2x <= |t| <= R
  std::optional<double> outer_tail;  // beyond R; absent when the data is not integrable
  double blaschke_term = 0.0;        // -K * dyadic total
  double blaschke_exact = 0.0;       // log|B(x + i/2)| over the stored zeros
  double dyadic_total = 0.0;
  double bound = 0.0;  // sum of the finite terms
  bool certified = true;
  std::vector<std::string> flags;
};

/// Lower bounds on log|f(x + i/2)| for f = e^{iaz} B F at each x >= 1.
std::vector<Prop26Bound> certify_prop26(const factorization::NevanlinnaParts& parts,
                                        const std::vector<double>& xs, const SeparationParams& p,
                                        const QuadratureSpec& q);

/// Geometric grid x0 * factor^j, j < count.
std::vector<double> geometric_grid(double x0, double factor, int count);

}  // namespace stripbound::certify
