#include "stripbound/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "stripbound/error.hpp"

namespace stripbound {

namespace {

// Abscissae and weights of the 15-point Kronrod rule with its embedded
// 7-point Gauss rule (odd-indexed abscissae are the Gauss nodes).
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double value;
  double error;
  bool finite;
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kWk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  const double err = std::abs(kronrod - gauss);
  return {kronrod, err, std::isfinite(kronrod) && std::isfinite(err)};
}

class Integrator {
 public:
  Integrator(const std::function<double(double)>& f, const QuadratureSpec& spec, double width)
      : f_(f), spec_(spec), total_width_(width) {}

  Estimate run(double a, double b) {
    Estimate e;
    const Panel p = gauss_kronrod(f_, a, b);
    ++panels_;
    recurse(a, b, p, 0, e);
    if (!converged_) e.add_flag(kFlagNotConverged);
    return e;
  }

 private:
  void recurse(double a, double b, const Panel& p, int depth, Estimate& out) {
    const double share = spec_.abs_tol * (b - a) / total_width_;
    const double rel = spec_.rel_tol * std::abs(p.value);
    const bool ok = p.finite && (p.error <= share || p.error <= rel);
    const double mid = 0.5 * (a + b);
    const bool splittable = mid > a && mid < b && depth < 200;
    if (ok || !splittable || panels_ + 2 > spec_.max_subdivisions) {
      if (!ok) converged_ = false;
      out.value = p.value;
      out.error_estimate = p.error;
      return;
    }
    const Panel left = gauss_kronrod(f_, a, mid);
    const Panel right = gauss_kronrod(f_, mid, b);
    panels_ += 2;
    Estimate l, r;
    recurse(a, mid, left, depth + 1, l);
    recurse(mid, b, right, depth + 1, r);
    out.value = l.value + r.value;
    out.error_estimate = l.error_estimate + r.error_estimate;
  }

  const std::function<double(double)>& f_;
  const QuadratureSpec& spec_;
  double total_width_;
  int panels_ = 0;
  bool converged_ = true;
};

// Pairwise sum keeps the combination order independent of panel count.
double tree_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() == 1) return v[0];
  const std::size_t h = v.size() / 2;
  return tree_sum(v.subspan(0, h)) + tree_sum(v.subspan(h));
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) throw InvalidInput("tolerance must be > 0");
  if (!(rel_tol >= 0.0)) throw InvalidInput("relative tolerance must be >= 0");
  if (max_subdivisions < 1) throw InvalidInput("max subdivisions must be >= 1");
  if (!(tail_radius > 0.0)) throw InvalidInput("tail radius must be > 0");
  if (!(divergence_threshold > 0.0)) throw InvalidInput("divergence threshold must be > 0");
  if (!(log_floor > 0.0 && log_floor < 1.0)) throw InvalidInput("log floor must lie in (0, 1)");
}

bool Estimate::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

void Estimate::add_flag(const std::string& f) {
  if (!has_flag(f)) flags.push_back(f);
}

void Estimate::merge_flags(const Estimate& other) {
  for (const auto& f : other.flags) add_flag(f);
}

Estimate integrate(const std::function<double(double)>& f, double a, double b,
                   const QuadratureSpec& spec, std::span<const double> breakpoints) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidInput("integration limits must be finite");
  if (a == b) return {};
  if (a > b) {
    Estimate e = integrate(f, b, a, spec, breakpoints);
    e.value = -e.value;
    return e;
  }
  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double width = b - a;
  std::vector<double> values;
  std::vector<double> errors;
  Estimate total;
  QuadratureSpec local = spec;
  local.max_subdivisions = std::max(1, spec.max_subdivisions / static_cast<int>(cuts.size() - 1));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Integrator integrator(f, local, width);
    Estimate piece = integrator.run(cuts[i], cuts[i + 1]);
    values.push_back(piece.value);
    errors.push_back(piece.error_estimate);
    total.merge_flags(piece);
  }
  total.value = tree_sum(values);
  total.error_estimate = tree_sum(errors);
  return total;
}

}  // namespace stripbound
