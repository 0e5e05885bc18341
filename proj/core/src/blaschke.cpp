#include "stripbound/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stripbound/error.hpp"

namespace stripbound::blaschke {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_closed_upper(Complex z) {
  require_finite(z, "evaluation point");
  if (z.imag() < 0.0) throw InvalidInput("evaluation point outside the closed upper half-plane");
}

// -1/2 log(1 - u) style factor moduli are computed as 1/2 log1p(-u) so the
// value is exactly 0 on the real axis and accurate near it.
double half_log1p_neg(double u) { return 0.5 * std::log1p(-u); }

// log|factor| in extended precision. Exponents reach 1e25, so the product's
// log-modulus is accumulated in long double and rounded once at the end.
long double node_log_modulus(FactorKind kind, double x, Complex z) {
  const long double dx = static_cast<long double>(z.real()) - x;
  const long double y = z.imag();
  const long double up = y + 1.0L;
  const long double u = 4.0L * y / (dx * dx + up * up);
  if (u >= 1.0L) return -std::numeric_limits<long double>::infinity();
  long double lm = 0.5L * std::log1p(-u);
  if (kind == FactorKind::kModified) lm += 2.0L * y / (static_cast<long double>(x) * x + 1.0L);
  return lm;
}

struct NodeSearchResult {
  double x;
  double rho;
};

NodeSearchResult find_node(const RateFunction& rho, double start, double target, int n,
                           const ConstructOptions& opt) {
  auto fail = [&]() -> NodeSearchResult {
    std::ostringstream os;
    os << "rate function decays too slowly to locate node " << n << " (need rho <= " << target
       << " before x = " << opt.abscissa_cap << ")";
    throw ConstructionError(os.str());
  };
  if (start > opt.abscissa_cap) fail();
  if (rho.non_increasing()) {
    double r = rho(start);
    if (r <= target) return {start, r};
    // Gallop to a bracketing grid point, then bisect over integers.
    double lo = start;
    double step = 1.0;
    double hi = start + step;
    for (;;) {
      if (hi > opt.abscissa_cap) hi = opt.abscissa_cap;
      r = rho(hi);
      if (r <= target) break;
      if (hi == opt.abscissa_cap) fail();
      lo = hi;
      step *= 2.0;
      hi = lo + step;
    }
    while (hi - lo > 1.0) {
      const double mid = std::floor(0.5 * (lo + hi));
      if (rho(mid) <= target) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return {hi, rho(hi)};
  }
  long long scanned = 0;
  for (double x = start; x <= opt.abscissa_cap; x += 1.0) {
    const double r = rho(x);
    if (r <= target) return {x, r};
    if (++scanned >= opt.max_scan) break;
  }
  return fail();
}

ProductConfig select_nodes(const RateFunction& rho, double power, int n_terms, FactorKind kind,
                           const ConstructOptions& opt) {
  if (n_terms < 1) throw InvalidInput("n_terms must be >= 1");
  if (!(opt.abscissa_cap >= 1.0 && opt.abscissa_cap <= 9007199254740992.0)) {
    throw InvalidInput("abscissa cap must lie in [1, 2^53]");
  }
  ProductConfig cfg;
  cfg.kind = kind;
  cfg.tail_law = TailLaw{power};
  cfg.rate_name = rho.name();
  double prev = 0.0;
  for (int n = 1; n <= n_terms; ++n) {
    const double start = std::max(prev + 1.0, 1.0);
    const double target = std::ldexp(1.0, -n);
    const NodeSearchResult found = find_node(rho, start, target, n, opt);
    const double k = std::ceil(found.rho * std::pow(found.x, power));
    if (!is_valid_count(k)) {
      throw ConstructionError("exponent overflow at node " + std::to_string(n));
    }
    cfg.nodes.push_back({found.x, k});
    prev = found.x;
  }
  return cfg;
}

}  // namespace

std::string to_string(FactorKind kind) {
  return kind == FactorKind::kNormalized ? "normalized" : "modified";
}

FactorKind factor_kind_from_string(const std::string& s) {
  if (s == "normalized") return FactorKind::kNormalized;
  if (s == "modified") return FactorKind::kModified;
  throw InvalidInput("unknown factor kind: " + s);
}

void ProductConfig::validate() const {
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& node = nodes[i];
    require_finite(node.x, "node abscissa");
    if (node.x < 1.0) throw InvalidInput("node abscissae must be >= 1");
    if (!(node.x > prev)) throw InvalidInput("node abscissae must be strictly increasing");
    if (!is_valid_count(node.exponent)) {
      throw InvalidInput("node exponent must be a positive integer (node " + std::to_string(i + 1) + ")");
    }
    prev = node.x;
  }
  if (tail_law && !(std::isfinite(tail_law->exponent) && tail_law->exponent > 0.0)) {
    throw InvalidInput("tail law exponent must be > 0");
  }
}

ZeroSet ProductConfig::zero_set() const {
  std::vector<ZeroEntry> raw;
  raw.reserve(nodes.size());
  for (const auto& n : nodes) raw.push_back({Complex{n.x, 1.0}, n.exponent});
  return make_zero_set(std::move(raw));
}

LogValue log_factor_normalized(Complex w, Complex z) {
  require_finite(w, "node");
  if (!(w.imag() > 0.0)) throw InvalidInput("node must lie in the open upper half-plane");
  require_closed_upper(z);
  if (z == std::conj(w)) throw EvaluationError("pole of the Blaschke factor hit");
  const double dx = z.real() - w.real();
  const double sum = z.imag() + w.imag();
  const double u = 4.0 * z.imag() * w.imag() / (dx * dx + sum * sum);
  const Complex w2p1 = w * w + 1.0;
  const double norm_phase = (w2p1 == Complex{0.0, 0.0}) ? 0.0 : -std::arg(w2p1);
  const double phase = (u >= 1.0) ? 0.0 : std::arg(z - w) - std::arg(z - std::conj(w)) + norm_phase;
  return {half_log1p_neg(std::min(u, 1.0)), wrap_phase(phase)};
}

Complex factor_normalized(Complex w, Complex z) { return log_factor_normalized(w, z).value(); }

LogValue log_factor_modified(double s, Complex z) {
  require_finite(s, "modified node");
  require_closed_upper(z);
  const double dx = z.real() - s;
  const double up = z.imag() + 1.0;
  const double u = 4.0 * z.imag() / (dx * dx + up * up);
  const double s2p1 = s * s + 1.0;
  const double log_mod = half_log1p_neg(std::min(u, 1.0)) + 2.0 * z.imag() / s2p1;
  const Complex rel = z - Complex{s, 0.0};
  const double phase = (u >= 1.0) ? 0.0
                                  : std::arg(rel - kI) - std::arg(rel + kI) -
                                        2.0 * std::arg(Complex{s, 1.0}) - 2.0 * z.real() / s2p1;
  return {log_mod, wrap_phase(phase)};
}

Complex factor_modified(double s, Complex z) { return log_factor_modified(s, z).value(); }

Complex analytic_log_factor_modified(double s, Complex z) {
  require_finite(s, "modified node");
  require_finite(z, "evaluation point");
  if (!(std::abs(z) < std::abs(s))) throw InvalidInput("analytic branch needs |z| < |s|");
  const Complex a = z / Complex{s, 1.0};
  const Complex b = z / Complex{s, -1.0};
  return std::log(1.0 - a) + a - std::log(1.0 - b) - b;
}

LogFactorBounds log_factor_bounds(double s, Complex z) {
  require_finite(s, "modified node");
  require_finite(z, "evaluation point");
  if (!(std::abs(s) > 1.0)) throw InvalidInput("log factor bounds need |s| > 1");
  LogFactorBounds b;
  b.vertical_bound = 2.0 * z.imag() / (s * s + 1.0);
  const double r = std::abs(z);
  if (r <= 0.5 * std::abs(s)) b.small_z_bound = kSmallZConstant * r * r / std::pow(std::abs(s), 3);
  return b;
}

double ProductValue::modulus() const { return std::exp(log_value.log_modulus); }

ProductValue product_eval(const ProductConfig& cfg, Complex z, double tail_tol) {
  cfg.validate();
  require_closed_upper(z);
  if (!(tail_tol > 0.0)) throw InvalidInput("tail tolerance must be > 0");

  ProductValue out;
  LogValue acc{0.0, 0.0};
  long double log_mod = 0.0L;
  for (const auto& node : cfg.nodes) {
    const LogValue f = cfg.kind == FactorKind::kNormalized
                           ? log_factor_normalized(Complex{node.x, 1.0}, z)
                           : log_factor_modified(node.x, z);
    acc = acc * pow(f, node.exponent);
    log_mod += node.exponent * node_log_modulus(cfg.kind, node.x, z);
  }
  acc.log_modulus = static_cast<double>(log_mod);
  out.log_value = acc;

  if (!cfg.tail_law || cfg.nodes.empty()) return out;

  const double n_stored = static_cast<double>(cfg.nodes.size());
  const double x_last = cfg.nodes.back().x;
  const double x_next = x_last + 1.0;  // lower bound for every omitted abscissa
  const double r = std::abs(z) / x_next;
  const double y = z.imag();
  const double geometric = std::ldexp(1.0, -static_cast<int>(std::min(n_stored, 1000.0)));
  double tail = std::numeric_limits<double>::infinity();
  if (r <= 0.5) {
    if (cfg.kind == FactorKind::kNormalized && cfg.tail_law->exponent <= 2.0) {
      // Omitted factor n: |log|.|| <= u_n / (2 (1 - u_max)) with
      // u_n <= 4y / ((1 - r)^2 x_n^2) and sum k_n / x_n^2 <= 2^-N + 1/x_N.
      const double gap = x_next - std::abs(z);
      const double u_max = 4.0 * y / (gap * gap + (y + 1.0) * (y + 1.0));
      tail = 2.0 * y / ((1.0 - r) * (1.0 - r) * (1.0 - u_max)) * (geometric + 1.0 / x_last);
    } else if (cfg.kind == FactorKind::kModified && cfg.tail_law->exponent <= 3.0) {
      // |log B(t_n, z)| <= C |z|^2 / t_n^3 and sum k_n / t_n^3 <= 2^-N + 1/(2 t_N^2).
      const double rz = std::abs(z);
      tail = kSmallZConstant * rz * rz * (geometric + 0.5 / (x_last * x_last));
    }
  }
  out.tail.value = tail;
  out.tail_certified = std::isfinite(tail) && tail <= tail_tol;
  return out;
}

ProductConfig construct_prop23(const RateFunction& rho, int n_terms, const ConstructOptions& opt) {
  return select_nodes(rho, 2.0, n_terms, FactorKind::kNormalized, opt);
}

ProductConfig construct_prop25(const RateFunction& rho, double beta, int n_terms,
                               const ConstructOptions& opt) {
  BetaEnvelope{1.0, beta}.validate();
  ProductConfig cfg = select_nodes(rho, beta + 1.0, n_terms, FactorKind::kModified, opt);
  cfg.beta = beta;
  return cfg;
}

LogValue log_growth_multiplier(double c_mult, double beta, Complex z) {
  require_finite(c_mult, "multiplier constant");
  if (c_mult < 0.0) throw InvalidInput("multiplier constant must be >= 0");
  BetaEnvelope{1.0, beta}.validate();
  require_closed_upper(z);
  if (c_mult == 0.0) return {0.0, 0.0};
  // Im(z + i) >= 1, so the principal logarithm is continuous here.
  const Complex w = c_mult * std::exp(beta * std::log(z + kI));
  return {w.real(), wrap_phase(w.imag())};
}

Complex growth_multiplier(double c_mult, double beta, Complex z) {
  return log_growth_multiplier(c_mult, beta, z).value();
}

FunctionModel product_model(const ProductConfig& cfg) {
  cfg.validate();
  std::vector<ZeroEntry> zeros;
  std::vector<double> features;
  for (const auto& n : cfg.nodes) {
    zeros.push_back({Complex{n.x, 1.0}, n.exponent});
    features.push_back(n.x);
  }
  std::ostringstream os;
  os << to_string(cfg.kind) << "-product[" << cfg.nodes.size() << "]";
  return FunctionModel(
      os.str(),
      [cfg](Complex z) {
        return product_eval(cfg, z, std::numeric_limits<double>::infinity()).log_value;
      },
      std::move(zeros), std::move(features));
}

FunctionModel multiplier_model(double c_mult, double beta) {
  BetaEnvelope{1.0, beta}.validate();
  std::ostringstream os;
  os << "exp(" << c_mult << "(z+i)^" << beta << ")";
  return FunctionModel(os.str(),
                       [c_mult, beta](Complex z) { return log_growth_multiplier(c_mult, beta, z); });
}

std::optional<double> calibrate_multiplier(const ProductConfig& cfg, double beta,
                                           const std::vector<Complex>& samples,
                                           const std::vector<double>& c_grid, double level) {
  BetaEnvelope{1.0, beta}.validate();
  std::vector<double> base;
  base.reserve(samples.size());
  for (auto z : samples) {
    base.push_back(product_eval(cfg, z, std::numeric_limits<double>::infinity()).log_value.log_modulus);
  }
  for (double c : c_grid) {
    bool ok = true;
    for (std::size_t i = 0; i < samples.size() && ok; ++i) {
      ok = base[i] + log_growth_multiplier(c, beta, samples[i]).log_modulus <= level;
    }
    if (ok) return c;
  }
  return std::nullopt;
}

}  // namespace stripbound::blaschke
