#include "stripbound/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "stripbound/error.hpp"

namespace stripbound::certify {

namespace {

std::string describe(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

std::vector<Complex> default_envelope_grid() {
  const double xs[] = {-100.0, -30.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 30.0, 100.0};
  const double ys[] = {0.0, 0.25, 0.5, 0.75, 1.0, 2.0, 5.0};
  std::vector<Complex> grid;
  for (double y : ys) {
    for (double x : xs) grid.emplace_back(x, y);
  }
  return grid;
}

NormalizedModel normalize_growth(const FunctionModel& f, const GrowthEnvelope& env,
                                 const std::vector<Complex>& grid) {
  env.validate();
  FunctionModel normalized =
      f * FunctionModel::exp_linear(env.alpha) * FunctionModel::inverse_shifted_power(env.c, env.m);
  NormalizedModel out{std::move(normalized), env, {}};
  const double limit = std::log1p(kEnvelopeSlack);
  for (auto z : grid) {
    const double lm = out.model.log_modulus(z);
    if (lm > limit) out.violations.push_back({z, std::exp(lm)});
  }
  return out;
}

RatioProfile strip_ratio_profile(const FunctionModel& f, const std::vector<double>& xs, double p) {
  if (!(std::isfinite(p) && p > 0.0)) throw InvalidInput("profile exponent must be > 0");
  RatioProfile prof;
  prof.exponent = p;
  double prev = -std::numeric_limits<double>::infinity();
  for (double x : xs) {
    require_finite(x, "profile abscissa");
    if (x < 1.0 || !(x > prev)) throw InvalidInput("profile abscissae must be >= 1 and increasing");
    prev = x;
    double lm = 0.0;
    try {
      lm = f.log_modulus(Complex{x, 0.5});
    } catch (const Error& e) {
      std::ostringstream os;
      os << "evaluation failed at x = " << x << ": " << e.what();
      throw EvaluationError(os.str());
    }
    if (!std::isfinite(lm)) {
      std::ostringstream os;
      os << f.name() << " vanishes on the midline at x = " << x;
      throw EvaluationError(os.str());
    }
    prof.samples.push_back({x, lm, lm / std::pow(x, p)});
  }
  prof.tail_sup.assign(prof.samples.size(), 0.0);
  double running = 0.0;
  for (std::size_t i = prof.samples.size(); i-- > 0;) {
    running = std::max(running, std::abs(prof.samples[i].ratio));
    prof.tail_sup[i] = running;
  }
  prof.min_ratio = prof.samples.empty() ? 0.0 : prof.samples.front().ratio;
  for (const auto& s : prof.samples) prof.min_ratio = std::min(prof.min_ratio, s.ratio);
  return prof;
}

void check_dyadic_hypotheses(const ZeroSet& zs, const SeparationParams& p) {
  p.validate();
  for (const auto& e : zs.entries()) {
    if (e.position.imag() < 1.0) {
      throw HypothesisViolation("zero " + describe(e.position) +
                                " violates Im >= 1 (lies in or below the strip 0 < Im z < 1)");
    }
  }
  const auto bad = check_separation(zs, p);
  if (!bad.empty()) {
    const auto& v = bad.front();
    std::ostringstream os;
    os << "separation violated by " << bad.size() << " pair(s); first: "
       << describe(zs.entries()[v.first].position) << " and " << describe(zs.entries()[v.second].position)
       << " at distance " << v.distance << " < " << v.threshold;
    throw HypothesisViolation(os.str());
  }
}

DyadicReport dyadic_estimate(const ZeroSet& zs, double x, const SeparationParams& p) {
  require_finite(x, "x");
  if (x < 1.0) throw InvalidInput("dyadic estimate needs x >= 1");
  check_dyadic_hypotheses(zs, p);

  DyadicReport rep;
  rep.x = x;
  rep.m = 1.0 + 1.0 / p.k;
  rep.max_multiplicity = zs.max_multiplicity();
  const double near_radius = x / rep.m;
  std::map<int, Annulus> annuli;
  for (const auto& e : zs.entries()) {
    const double dx = x - e.position.real();
    const double im = e.position.imag();
    const double term = e.multiplicity * im / (dx * dx + im * im);
    const double dist = std::abs(Complex{x, 0.0} - e.position);
    if (dist >= near_radius) {
      rep.far_sum += term;
      ++rep.far_count;
      continue;
    }
    // dist >= Im >= 1, so n = exponent of dist in [2^{n-1}, 2^n) is >= 1.
    int n = 0;
    std::frexp(dist, &n);
    Annulus& a = annuli[n];
    a.n = n;
    ++a.card;
    a.multiplicity_count += e.multiplicity;
    a.mass += e.multiplicity * im;
    a.sum += term;
    ++rep.near_count;
  }
  const double sqrt_x = std::sqrt(x);
  double total_mass = 0.0;
  for (auto& [n, a] : annuli) {
    rep.near_sum += a.sum;
    total_mass += a.mass;
    rep.constants.c1_card =
        std::max(rep.constants.c1_card, static_cast<double>(a.card) / (std::ldexp(1.0, 2 * n) * sqrt_x));
    rep.constants.c1_mass = std::max(rep.constants.c1_mass, a.mass / (std::ldexp(1.0, 3 * n) * sqrt_x));
    rep.annuli.push_back(a);
  }
  rep.total = rep.far_sum + rep.near_sum;
  rep.constants.c1 = std::max(rep.constants.c1_card, rep.constants.c1_mass);
  rep.constants.c2 = total_mass / (1.0 + x * x);
  rep.constants.c3 = rep.near_sum / x;
  return rep;
}

std::vector<Prop26Bound> certify_prop26(const factorization::NevanlinnaParts& parts,
                                        const std::vector<double>& xs, const SeparationParams& p,
                                        const QuadratureSpec& q) {
  parts.validate();
  q.validate();
  check_dyadic_hypotheses(parts.zeros, p);
  const auto& decay = parts.boundary.decay;
  if (decay.exponent > 1.0 && decay.coefficient > 0.0) {
    throw HypothesisViolation("boundary modulus of " + parts.boundary.name +
                              " is not declared O(|t|): exponent " + std::to_string(decay.exponent));
  }

  std::vector<Prop26Bound> out;
  for (double x : xs) {
    require_finite(x, "x");
    if (x < 1.0) throw InvalidInput("certified abscissae must be >= 1");
    Prop26Bound b;
    b.x = x;
    b.exponential_term = -0.5 * parts.a;

    const auto& bm = parts.boundary;
    Estimate inner = factorization::poisson_window(bm.log_modulus, x, 0.5, -2.0 * x, 2.0 * x, q, bm.features);
    b.outer_inner = inner.value - inner.error_estimate;

    const double radius = std::max({q.tail_radius, 4.0 * x, 2.0 * x + 1.0, 2.0 * decay.from_radius});
    const auto log_minus = [&](double t) { return std::min(0.0, bm.log_modulus(t)); };
    Estimate right = factorization::poisson_window(log_minus, x, 0.5, 2.0 * x, x + radius, q, bm.features);
    Estimate left = factorization::poisson_window(log_minus, x, 0.5, x - radius, -2.0 * x, q, bm.features);
    b.outer_complement = right.value + left.value - right.error_estimate - left.error_estimate;

    Estimate flags;
    flags.merge_flags(inner);
    flags.merge_flags(right);
    flags.merge_flags(left);
    const double tail = factorization::poisson_tail_bound(decay, 0.5, radius);
    if (std::isfinite(tail)) {
      b.outer_tail = -tail;
    } else {
      b.certified = false;
      flags.add_flag("boundary_tail_not_integrable");
    }

    const DyadicReport rep = dyadic_estimate(parts.zeros, x, p);
    b.dyadic_total = rep.total;
    b.blaschke_term = -kBlaschkeComparison * rep.total;
    for (const auto& e : parts.zeros.entries()) {
      const double dx = x - e.position.real();
      const double up = e.position.imag() + 0.5;
      b.blaschke_exact += e.multiplicity * 0.5 * std::log1p(-2.0 * e.position.imag() / (dx * dx + up * up));
    }

    b.bound = b.exponential_term + b.outer_inner + b.outer_complement + b.outer_tail.value_or(0.0) +
              b.blaschke_term;
    if (flags.has_flag(kFlagNotConverged)) b.certified = false;
    b.flags = flags.flags;
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<double> geometric_grid(double x0, double factor, int count) {
  if (!(std::isfinite(x0) && x0 > 0.0)) throw InvalidInput("grid start must be > 0");
  if (!(std::isfinite(factor) && factor > 1.0)) throw InvalidInput("grid factor must be > 1");
  if (count < 1) throw InvalidInput("grid count must be >= 1");
  std::vector<double> xs;
  double x = x0;
  for (int j = 0; j < count; ++j) {
    xs.push_back(x);
    x *= factor;
  }
  return xs;
}

}  // namespace stripbound::certify
