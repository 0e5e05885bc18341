#include "stripbound/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stripbound/error.hpp"

namespace stripbound::factorization {

namespace {

constexpr double kHalfPi = 0.5 * kPi;
constexpr double kMaxTailRadius = 1e15;

// Replaces -inf (exact zeros) by log(floor) and remembers that it did.
class ClippedLog {
 public:
  explicit ClippedLog(double floor) : log_floor_(std::log(floor)) {}

  double operator()(double v) const {
    if (v == -std::numeric_limits<double>::infinity() || v < -std::numeric_limits<double>::max()) {
      clipped_ = true;
      return log_floor_;
    }
    return v;
  }
  bool clipped() const { return clipped_; }

 private:
  double log_floor_;
  mutable bool clipped_ = false;
};

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

double poisson_tail_bound(const DecayClass& d, double y, double radius) {
  if (d.coefficient == 0.0) return 0.0;
  if (!d.poisson_integrable()) return std::numeric_limits<double>::infinity();
  // For |t - x| = s >= R >= 2|x|: s/2 <= |t| <= 3s/2.
  const double p = d.exponent;
  const double cp = p >= 0.0 ? std::pow(1.5, p) : std::pow(2.0, -p);
  return 2.0 * y * d.coefficient * cp / kPi * std::pow(radius, p - 1.0) / (1.0 - p);
}

std::string to_string(DecayTag tag) {
  switch (tag) {
    case DecayTag::kBounded:
      return "bounded";
    case DecayTag::kLinear:
      return "linear";
    case DecayTag::kPower:
      return "power";
  }
  return "unknown";
}

DecayClass DecayClass::bounded(double bound) { return {DecayTag::kBounded, 0.0, bound, 0.0}; }

DecayClass DecayClass::linear(double slope, double from_radius) {
  return {DecayTag::kLinear, 1.0, slope, from_radius};
}

DecayClass DecayClass::power(double coefficient, double exponent, double from_radius) {
  return {DecayTag::kPower, exponent, coefficient, from_radius};
}

void DecayClass::validate() const {
  if (!std::isfinite(exponent) || !std::isfinite(coefficient) || !std::isfinite(from_radius)) {
    throw InvalidInput("decay class parameters must be finite");
  }
  if (exponent >= 2.0) throw InvalidInput("decay classes of quadratic or higher order are rejected");
  if (coefficient < 0.0 || from_radius < 0.0) {
    throw InvalidInput("decay coefficient and radius must be >= 0");
  }
}

BoundaryModulus BoundaryModulus::zero() {
  return {"zero", [](double) { return 0.0; }, DecayClass::bounded(0.0), {}};
}

BoundaryModulus BoundaryModulus::of_model(const FunctionModel& f, DecayClass decay) {
  decay.validate();
  return {"boundary(" + f.name() + ")", [f](double t) { return f.log_modulus(Complex{t, 0.0}); },
          decay, f.features()};
}

void NevanlinnaParts::validate() const {
  if (!(std::isfinite(a) && a >= 0.0)) throw InvalidInput("exponential rate a must be finite and >= 0");
  if (!boundary.log_modulus) throw InvalidInput("boundary modulus must be evaluable");
  boundary.decay.validate();
}

Estimate poisson_window(const std::function<double(double)>& integrand, double x, double y, double lo,
                        double hi, const QuadratureSpec& q, const std::vector<double>& features) {
  require_finite(x, "x");
  if (!(y > 0.0 && std::isfinite(y))) throw InvalidInput("Poisson height y must be > 0");
  if (!(lo <= hi)) throw InvalidInput("window limits out of order");
  const double th_lo = std::atan((lo - x) / y);
  const double th_hi = std::atan((hi - x) / y);
  std::vector<double> cuts;
  for (double t : features) cuts.push_back(std::atan((t - x) / y));
  Estimate e = integrate([&](double th) { return integrand(x + y * std::tan(th)); }, th_lo, th_hi, q, cuts);
  e.value /= kPi;
  e.error_estimate /= kPi;
  return e;
}

Estimate poisson_outer(const BoundaryModulus& bm, double x, double y, const QuadratureSpec& q) {
  q.validate();
  require_finite(x, "x");
  if (!(y > 0.0 && std::isfinite(y))) throw InvalidInput("Poisson height y must be > 0");
  if (!bm.log_modulus) throw InvalidInput("boundary modulus must be evaluable");
  bm.decay.validate();
  if (!bm.decay.poisson_integrable() && bm.decay.coefficient > 0.0) {
    throw EvaluationError("non-integrable boundary data: " + bm.name + " has decay exponent " +
                          std::to_string(bm.decay.exponent) + " >= 1");
  }
  double radius = std::max({q.tail_radius, 2.0 * std::abs(x) + 1.0, 2.0 * bm.decay.from_radius});
  double tail = poisson_tail_bound(bm.decay, y, radius);
  bool enlarged = false;
  while (tail > q.abs_tol && radius < kMaxTailRadius) {
    radius = std::min(radius * 10.0, kMaxTailRadius);
    tail = poisson_tail_bound(bm.decay, y, radius);
    enlarged = true;
  }
  if (tail > q.abs_tol) {
    std::ostringstream os;
    os << "non-integrable boundary data: tail bound " << tail << " exceeds tolerance " << q.abs_tol;
    throw EvaluationError(os.str());
  }
  const ClippedLog clip(q.log_floor);
  Estimate e = poisson_window([&](double t) { return clip(bm.log_modulus(t)); }, x, y, x - radius,
                              x + radius, q, bm.features);
  e.error_estimate += tail;
  if (enlarged) e.add_flag("tail_radius_enlarged");
  if (clip.clipped()) e.add_flag(kFlagClipped);
  return e;
}

LineFunction LineFunction::log_inverse_modulus(const FunctionModel& f, const QuadratureSpec& q) {
  const double floor = std::log(q.log_floor);
  return {[f, floor](double y) {
            const double v = f.log_modulus(Complex{y, 0.5});
            return -std::max(v, floor);
          },
          f.features()};
}

UniquenessResult uniqueness_integral(const LineFunction& g, const QuadratureSpec& q) {
  q.validate();
  if (!g.eval) throw InvalidInput("line function must be evaluable");
  // y = tan(theta) turns dy/(1+y^2) into d(theta) on (-pi/2, pi/2).
  const auto f = [&](double th) { return g.eval(std::tan(th)); };
  std::vector<double> cuts;
  for (double t : g.features) cuts.push_back(std::atan(t));

  UniquenessResult out;
  std::vector<double> increments;
  double y_prev = 0.0;
  double cumulative = 0.0;
  for (double y = 10.0; y <= q.tail_radius * (1.0 + 1e-12); y *= 10.0) {
    const double a = std::atan(y_prev);
    const double b = std::atan(y);
    Estimate right = integrate(f, a, b, q, cuts);
    Estimate left = integrate(f, -b, -a, q, cuts);
    const double inc = right.value + left.value;
    cumulative += inc;
    increments.push_back(inc);
    out.partial_integrals.push_back(cumulative);
    out.estimate.error_estimate += right.error_estimate + left.error_estimate;
    out.estimate.merge_flags(right);
    out.estimate.merge_flags(left);
    y_prev = y;
  }
  const double edge = std::atan(y_prev);
  Estimate rest_r = integrate(f, edge, kHalfPi, q, cuts);
  Estimate rest_l = integrate(f, -kHalfPi, -edge, q, cuts);
  const double rest = rest_r.value + rest_l.value;
  const bool rest_bad = !std::isfinite(rest) || rest_r.has_flag(kFlagNotConverged) ||
                        rest_l.has_flag(kFlagNotConverged);

  const std::size_t n = increments.size();
  const bool trend_up = n >= 2 && increments[n - 1] > 0.0 && increments[n - 1] >= increments[n - 2];
  if (trend_up && (cumulative > q.divergence_threshold || rest_bad)) {
    out.divergent = true;
    out.estimate.value = std::numeric_limits<double>::infinity();
    out.estimate.add_flag("divergent");
    return out;
  }
  out.estimate.value = cumulative + rest;
  out.estimate.error_estimate += rest_r.error_estimate + rest_l.error_estimate;
  out.estimate.merge_flags(rest_r);
  out.estimate.merge_flags(rest_l);
  return out;
}

double harnack_lower(double center_value) {
  if (!(std::isfinite(center_value) && center_value >= 0.0)) {
    throw InvalidInput("Harnack center value must be finite and >= 0");
  }
  return kHarnackConstant * center_value;
}

CarlemanTerms carleman_functional(const FunctionModel& f, double r, const QuadratureSpec& q) {
  q.validate();
  if (!(std::isfinite(r) && r > 1.0)) throw InvalidInput("Carleman radius must be > 1");
  const Complex center{0.0, 0.5};

  CarlemanTerms out;
  out.radius = r;
  std::vector<double> arc_cuts;
  std::vector<double> line_cuts;
  for (const auto& zero : f.known_zeros()) {
    const Complex w = zero.position - center;
    const double rho = std::abs(w);
    const bool on_arc = w.imag() >= 0.0 && near(rho, r);
    const bool on_inner = w.imag() >= 0.0 && near(rho, 1.0);
    const bool on_line = std::abs(w.imag()) <= 1e-12 && rho >= 1.0 && rho <= r;
    if (on_arc || on_inner || on_line) {
      std::ostringstream os;
      os << "zero of " << f.name() << " at " << zero.position << " lies on the Carleman contour (r = " << r
         << ")";
      throw EvaluationError(os.str());
    }
    if (w.imag() > 0.0 && rho > 1.0 && rho < r) {
      out.zero_term += zero.multiplicity * (1.0 / rho - rho / (r * r)) * (w.imag() / rho);
    }
    arc_cuts.push_back(std::arg(w));
    line_cuts.push_back(std::abs(w.real()));
  }
  for (double t : f.features()) line_cuts.push_back(std::abs(t));

  const ClippedLog clip(q.log_floor);
  const auto log_mod = [&](Complex z) { return clip(f.log_modulus(z)); };

  Estimate arc = integrate(
      [&](double th) { return log_mod(std::polar(r, th) + center) * std::sin(th); }, 0.0, kPi, q,
      arc_cuts);
  Estimate edge = integrate(
      [&](double x) {
        const double weight = 1.0 / (x * x) - 1.0 / (r * r);
        return weight * (log_mod(Complex{x, 0.5}) + log_mod(Complex{-x, 0.5}));
      },
      1.0, r, q, line_cuts);
  out.arc_term = arc.value / (kPi * r);
  out.boundary_term = edge.value / (2.0 * kPi);
  out.residual = out.zero_term - out.arc_term - out.boundary_term;
  out.error_estimate = arc.error_estimate / (kPi * r) + edge.error_estimate / (2.0 * kPi);
  Estimate flags;
  flags.merge_flags(arc);
  flags.merge_flags(edge);
  if (clip.clipped()) flags.add_flag(kFlagClipped);
  out.flags = flags.flags;
  return out;
}

Estimate carleman_deficiency(const FunctionModel& f, double r, double beta, const QuadratureSpec& q) {
  q.validate();
  if (!(std::isfinite(r) && r > 0.0)) throw InvalidInput("deficiency radius must be > 0");
  if (!(beta > 1.0 && beta < 2.0)) throw InvalidInput("beta must lie strictly inside (1, 2)");
  const ClippedLog clip(q.log_floor);
  std::vector<double> cuts = f.features();
  for (const auto& z : f.known_zeros()) cuts.push_back(z.position.real());
  Estimate e = integrate(
      [&](double x) { return std::max(0.0, -clip(f.log_modulus(Complex{x, 0.5}))); }, r / 3.0,
      2.0 * r / 3.0, q, cuts);
  const double scale = r * r * std::pow(r, beta - 1.0);
  e.value /= scale;
  e.error_estimate /= scale;
  if (clip.clipped()) e.add_flag(kFlagClipped);
  return e;
}

}  // namespace stripbound::factorization
