#pragma once

// Finite-rank and trace-class operator machinery. The ambient space is C^D;
// B(z) = E A(z) E^H for an orthonormal basis E (D x N) of the range space V,
// so I + B(z) is the identity on the orthogonal complement of V.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "stripbound/core.hpp"

namespace stripbound::op {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Relative scale of the default invertibility floor: |det| must exceed
/// kDetFloorScale * (1 + ||A||).
inline constexpr double kDetFloorScale = 1e-12;
/// Above this size the adjugate is formed from an SVD rather than cofactors.
inline constexpr int kCofactorMaxSize = 12;
/// Relative inflation of certificate numerators covering rounding in the
/// measured adjugate norm.
inline constexpr double kRoundingSlack = 1e-12;

/// z -> A(z), an N x N matrix, with optional analytic knowledge of the zeros
/// of det(I + A(.)) in the upper half-plane.
struct CoefficientFamily {
  std::string family;
  nlohmann::json params;
  std::function<CMatrix(Complex)> eval;
  std::optional<std::vector<Complex>> determinant_zeros;
};

/// Builds a registered family. Registered names: zero, constant, linear,
/// blaschke_diagonal, unitary_phase. Throws InvalidInput for unknown names
/// or malformed parameters.
CoefficientFamily make_family(const std::string& family, const nlohmann::json& params, int n);
std::vector<std::string> registered_families();

class FiniteRankSpec {
 public:
  /// basis: D x N with orthonormal columns (Gram = I to 1e-12), N >= 1.
  FiniteRankSpec(CMatrix basis, CoefficientFamily coeff, GrowthEnvelope growth);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int rank() const { return static_cast<int>(basis_.cols()); }
  const CMatrix& basis() const { return basis_; }
  const CoefficientFamily& coefficients() const { return coeff_; }
  const GrowthEnvelope& growth() const { return growth_; }

  /// A(z), checked to be N x N and finite.
  CMatrix coeff(Complex z) const;
  /// Dense D x D matrix I + E A(z) E^H.
  CMatrix assembled(Complex z) const;

 private:
  CMatrix basis_;
  CoefficientFamily coeff_;
  GrowthEnvelope growth_;
};

/// Finite truncation of a trace-class operator with cached singular values.
class TraceClassMatrix {
 public:
  explicit TraceClassMatrix(CMatrix m);

  const CMatrix& matrix() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }
  /// Nonnegative, sorted descending.
  const Eigen::VectorXd& singular_values() const { return sigma_; }

 private:
  CMatrix m_;
  Eigen::VectorXd sigma_;
};

struct SolveResult {
  CVector f;
  Complex det;       // det(I + A(z))
  double residual;   // ||(I + B(z)) f - g||
};

/// Solves (I + B(z)) f = g through the N x N system (I + A(z)) u = E^H g;
/// the complement component passes through. Throws EvaluationError
/// ("non-invertible at z") when |det| is below the floor.
SolveResult finite_rank_solve(const FiniteRankSpec& spec, Complex z, const CVector& g,
                              double floor_scale = kDetFloorScale);

/// prod (1 + lambda_j) over eigenvalues.
Complex fredholm_det(const TraceClassMatrix& m);
/// det(I + A(z)) = a(z).
Complex fredholm_det(const FiniteRankSpec& spec, Complex z);

double trace_norm(const TraceClassMatrix& m);
/// e^{||B||_1} >= |det(I + B)|.
double det_bound(const TraceClassMatrix& m);

/// Adjugate of M (transpose of the cofactor matrix); exact at singular M.
CMatrix adjugate(const CMatrix& m);
/// det(I + mu B) (I + mu B)^{-1}, continued through singular mu.
CMatrix regularized_inverse(const TraceClassMatrix& m, Complex mu);

/// Operator 2-norm (largest singular value).
double operator_norm(const CMatrix& m);

enum class Regime { kQuadratic, kLinear };
std::string to_string(Regime r);

/// Points of the strip where a(z) is checked: a rectangle [x_min, x_max] x
/// (0, 1) sampled on nx columns at the given heights, plus a winding-number
/// scan of its boundary (inset by `inset`) for zeros between samples.
struct StripGrid {
  double x_min = -20.0;
  double x_max = 20.0;
  int nx = 81;
  std::vector<double> heights{0.25, 0.5, 0.75};
  double inset = 1e-3;

  void validate() const;
};

struct SeparationWitness {
  SeparationParams params;
  /// Zero set of a(.); taken from the family when absent.
  std::optional<ZeroSet> zeros;
};

struct CertificateOptions {
  StripGrid strip;
  std::vector<double> epsilons{0.01, 0.1, 1.0};
  std::optional<SeparationWitness> witness;
  double floor_scale = kDetFloorScale;
};

struct InverseCertificate {
  double x = 0.0;
  double det_lower_bound = 0.0;   // |a(x + i/2)|
  double numerator_bound = 0.0;   // max(D_N env(x), |a|), inflated by kRoundingSlack
  double norm_bound = 0.0;        // numerator / det
  double envelope = 0.0;          // (1 + |x|)^{NM} e^{alpha N / 2}
  double cofactor_scale = 0.0;    // D_N measured over the certificate grid
  Regime regime = Regime::kQuadratic;
  std::string provenance;
};

struct EpsilonEnvelope {
  double epsilon = 0.0;
  double log_constant = 0.0;  // sup_x log(norm_bound(x)) - eps x^2
};

struct LogDetSample {
  double x = 0.0;
  double log_abs_det = 0.0;
  double ratio = 0.0;  // log|a(x + i/2)| / x^2 (0 at x = 0)
};

struct CertificateReport {
  std::vector<InverseCertificate> certificates;
  std::vector<LogDetSample> log_det_profile;
  std::vector<EpsilonEnvelope> envelopes;
  Regime regime = Regime::kQuadratic;
  double min_strip_det = 0.0;
  /// max ||A(z)||_1 / (1 + |z|) over the strip samples; the linear trace-norm
  /// growth hypothesis is only checked on these samples.
  double trace_growth_constant = 0.0;
  std::string regime_note;
};

/// Verifies a(z) != 0 on the strip grid (throws HypothesisViolation naming
/// the offending point or the located zero) and returns one certificate per x.
CertificateReport inverse_norm_certificates(const FiniteRankSpec& spec, const std::vector<double>& xs,
                                            const CertificateOptions& opt = {});

InverseCertificate inverse_norm_certificate(const FiniteRankSpec& spec, double x,
                                            const CertificateOptions& opt = {});

/// Direct norm ||(I + B(x + i/2))^{-1}|| from the dense D x D inverse.
double direct_inverse_norm(const FiniteRankSpec& spec, double x);

}  // namespace stripbound::op
