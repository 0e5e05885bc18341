// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "oracles.hpp"
#include "stripbound/blaschke.hpp"
#include "stripbound/certify.hpp"
#include "stripbound/error.hpp"
#include "stripbound/factorization.hpp"
#include "stripbound/operator.hpp"

namespace sb = stripbound;
namespace bl = stripbound::blaschke;
namespace fz = stripbound::factorization;
namespace op = stripbound::op;
using sb::Complex;
using nlohmann::json;
using oracle::CMatrix;
using oracle::CVector;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && failures_++ < 3) first_ += (first_.empty() ? "" : "; ") + what;
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + first_};
  }

 private:
  int failures_ = 0;
  std::string first_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome unimodularity() {
  const auto t0 = std::chrono::steady_clock::now();
  oracle::Rng rng(1001);
  Check c;
  double worst = 0.0;
  for (int cfg_i = 0; cfg_i < 50; ++cfg_i) {
    const auto kind = cfg_i % 2 == 0 ? bl::FactorKind::kNormalized : bl::FactorKind::kModified;
    const auto cfg = oracle::random_config(rng, kind, 200);
    for (int j = 0; j < 100; ++j) {
      const double x = rng.uniform(-1e4, 1e4);
      const double dev = std::abs(bl::product_eval(cfg, {x, 0.0}).modulus() - 1.0);
      worst = std::max(worst, dev);
      c.require(dev <= 1e-10, "||B(" + fmt(x) + ")| - 1| = " + fmt(dev));
    }
  }
  const double t = seconds_since(t0);
  c.require(t <= 10.0, "runtime " + fmt(t) + " s > 10 s");
  return c.done("worst ||B| - 1| = " + fmt(worst) + ", " + fmt(t) + " s");
}

Outcome normalized_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  const auto rho = sb::RateFunction::reciprocal_log();
  const auto cfg = bl::construct_prop23(rho, 5);
  const double log3 = std::log(3.0);
  for (const auto& node : cfg.nodes) {
    const double k = node.exponent;
    const double log_b = bl::product_eval(cfg, {node.x, 0.5}).log_value.log_modulus;
    c.require(log_b <= -k * log3 + 0.01, "|B(x_n + i/2)| above 3^-k e^0.01 at x = " + fmt(node.x));
    // 3^-k < e^{-rho x^2}  <=>  k log 3 > rho x^2; rho x^2 <= k so this holds with margin.
    c.require(k * log3 > rho(node.x) * node.x * node.x, "3^-k >= e^{-rho x^2} at x = " + fmt(node.x));
  }
  const double t = seconds_since(t0);
  c.require(t <= 5.0, "runtime " + fmt(t) + " s > 5 s");
  return c.done("5 nodes, last x = " + fmt(cfg.nodes.back().x) + ", k = " + fmt(cfg.nodes.back().exponent) +
                ", " + fmt(t) + " s");
}

Outcome tail_law() {
  oracle::Rng rng(1003);
  Check c;
  double worst = 0.0;
  for (double s : {10.0, 100.0, 1000.0}) {
    for (int i = 0; i < 100; ++i) {
      const double r = 0.5 * s * std::sqrt(rng.uniform(0, 1));
      const double th = rng.uniform(0, sb::kPi);
      const Complex z = std::polar(r, th);
      const double bound = sb::blaschke::kSmallZConstant * std::norm(z) / (s * s * s);
      const double lib = std::abs(bl::analytic_log_factor_modified(s, z));
      // Independent value: principal log of the extended-precision factor,
      // valid because the factor stays near 1 for |z| <= s/2.
      const double ref = static_cast<double>(std::abs(std::log(oracle::modified_factor(s, z))));
      worst = std::max(worst, std::max(lib, ref) / bound);
      c.require(lib <= bound, "library |log B| above 8|z|^2/s^3 at s = " + fmt(s));
      c.require(ref <= bound, "oracle |log B| above 8|z|^2/s^3 at s = " + fmt(s));
    }
  }
  return c.done("worst ratio |log B| / (8|z|^2/s^3) = " + fmt(worst));
}

Outcome poisson_reconstruction() {
  const auto t0 = std::chrono::steady_clock::now();
  oracle::Rng rng(1004);
  Check c;
  const auto f = sb::FunctionModel::rational(1.0, {Complex{0, -2}}, {Complex{0, -1}});
  const auto bm = fz::BoundaryModulus::of_model(f, fz::DecayClass::power(1.5, -2.0, 1.0));
  sb::QuadratureSpec q;
  q.abs_tol = 1e-8;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform(-50, 50);
    const double direct = std::log(std::abs(Complex(x, 2.5) / Complex(x, 1.5)));
    const double err = std::abs(fz::poisson_outer(bm, x, 0.5, q).value - direct);
    worst = std::max(worst, err);
    c.require(err <= 1e-6, "error " + fmt(err) + " at x = " + fmt(x));
  }
  const double t = seconds_since(t0);
  c.require(t <= 10.0, "runtime " + fmt(t) + " s > 10 s");
  return c.done("worst error " + fmt(worst) + ", " + fmt(t) + " s");
}

Outcome uniqueness_closed_form() {
  Check c;
  sb::QuadratureSpec q;
  const auto g = fz::LineFunction::log_inverse_modulus(sb::FunctionModel::exp_linear(1.0), q);
  const auto r = fz::uniqueness_integral(g, q);
  c.require(!r.divergent, "reported divergent");
  const double err = std::abs(r.estimate.value - sb::kPi / 2);
  c.require(err <= 1e-8, "error " + fmt(err));
  return c.done("value " + fmt(r.estimate.value) + ", error " + fmt(err));
}

Outcome carleman_stability() {
  Check c;
  sb::QuadratureSpec q;
  const std::vector<std::pair<std::string, sb::FunctionModel>> models = {
      {"constant", sb::FunctionModel::constant(2.0)},
      {"exp_iz", sb::FunctionModel::exp_linear(1.0)},
      {"single_zero", sb::FunctionModel::rational(1.0, {Complex{1, 2}}, {Complex{1, -2}})}};
  std::string summary;
  for (const auto& [name, f] : models) {
    double lo = INFINITY, hi = -INFINITY;
    for (double r : {10.0, 20.0, 40.0, 80.0}) {
      const double res = fz::carleman_functional(f, r, q).residual;
      lo = std::min(lo, res);
      hi = std::max(hi, res);
    }
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double spread = scale > 1e-12 ? (hi - lo) / scale : hi - lo;
    c.require(spread <= 0.20, name + " residual varies by " + fmt(100 * spread) + "%");
    summary += (summary.empty() ? "" : ", ") + name + " " + fmt(100 * spread) + "%";
  }
  return c.done("residual spread " + summary);
}

Outcome dyadic_oracle() {
  Check c;
  std::vector<sb::ZeroEntry> raw;
  for (int j = 1; j <= 10000; ++j) raw.push_back({Complex(j, 1.0), 1.0});
  const auto zs = sb::make_zero_set(raw);
  const sb::SeparationParams p;
  sb::certify::check_dyadic_hypotheses(zs, p);
  // Unit-spaced zeros on Im = 1: the sum is at most pi + 1 for any x.
  const double constant = sb::kPi + 1.0;
  double worst_rel = 0.0, max_ratio = 0.0;
  for (double x : {10.0, 100.0, 1000.0}) {
    const auto rep = sb::certify::dyadic_estimate(zs, x, p);
    const long double ref = oracle::dyadic_sum(zs, x);
    const double rel = static_cast<double>(std::abs((rep.total - ref) / ref));
    worst_rel = std::max(worst_rel, rel);
    max_ratio = std::max(max_ratio, rep.total / x);
    c.require(rel <= 1e-12, "relative error " + fmt(rel) + " at x = " + fmt(x));
    c.require(rep.total <= constant * x, "total / x above pi + 1 at x = " + fmt(x));
  }
  return c.done("worst relative error " + fmt(worst_rel) + ", max total/x " + fmt(max_ratio));
}

Outcome finite_rank_oracle() {
  oracle::Rng rng(1008);
  Check c;
  double worst = 0.0;
  for (int draw = 0; draw < 200; ++draw) {
    const int n = rng.integer(1, 8);
    const int d = rng.integer(n, 64);
    op::CoefficientFamily fam;
    fam.family = "custom";
    const CMatrix a = rng.matrix(n, n, 0.5);
    fam.eval = [a](Complex) { return a; };
    const op::FiniteRankSpec spec(rng.orthonormal(d, n), fam, {});
    const Complex z{rng.uniform(-10, 10), rng.uniform(0, 1)};
    const CVector g = rng.vector(d);
    const CVector f = op::finite_rank_solve(spec, z, g).f;
    const CVector dense = oracle::dense_solve(spec.assembled(z), g);
    const double rel = (f - dense).norm() / dense.norm();
    worst = std::max(worst, rel);
    c.require(rel <= 1e-9, "relative error " + fmt(rel) + " (N = " + std::to_string(n) + ", D = " +
                               std::to_string(d) + ")");
  }
  CMatrix basis = CMatrix::Zero(2, 1);
  basis(0, 0) = 1.0;
  const op::FiniteRankSpec rank_one(basis, op::make_family("constant", {{"matrix", {{1.0}}}}, 1), {});
  CVector e1 = CVector::Zero(2), e2 = CVector::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  c.require((op::finite_rank_solve(rank_one, {0.3, 0.5}, e1).f - 0.5 * e1).norm() <= 1e-12, "g = e1 not e1/2");
  c.require((op::finite_rank_solve(rank_one, {0.3, 0.5}, e2).f - e2).norm() <= 1e-12, "g = e2 not passed through");
  return c.done("200 specs, worst relative error " + fmt(worst) + "; rank-one closed forms exact");
}

Outcome determinant_suite() {
  oracle::Rng rng(1009);
  Check c;
  double worst_det = 0.0;
  int singular_checked = 0;
  for (int draw = 0; draw < 100; ++draw) {
    const int n = rng.integer(2, 10);
    const CMatrix b = rng.matrix(n, n, rng.uniform(0.05, 1.5));
    const op::TraceClassMatrix m(b);
    const Complex det = op::fredholm_det(m);
    const Complex ref = oracle::lu_det(CMatrix::Identity(n, n) + b);
    const double rel = std::abs(det - ref) / std::abs(ref);
    worst_det = std::max(worst_det, rel);
    c.require(rel <= 1e-10, "fredholm_det relative error " + fmt(rel));

    const double trace_norm = oracle::singular_values(b).sum();
    c.require(std::abs(ref) <= std::exp(trace_norm) * (1 + 1e-12), "|det(I+B)| > e^{||B||_1}");

    std::vector<Complex> mus = {rng.complex_normal(), std::polar(2.0, rng.uniform(0, 2 * sb::kPi))};
    Eigen::ComplexEigenSolver<CMatrix> es(b);
    for (int i = 0; i < n; ++i) {
      if (std::abs(es.eigenvalues()(i)) > 1e-3) {
        mus.push_back(-1.0 / es.eigenvalues()(i));
        ++singular_checked;
        break;
      }
    }
    for (Complex mu : mus) {
      const double norm = oracle::spectral_norm(op::regularized_inverse(m, mu));
      const double bound = std::exp(trace_norm * std::abs(mu));
      c.require(norm <= bound * (1 + 1e-9), "||F_B(mu)|| = " + fmt(norm) + " > " + fmt(bound));
    }
  }
  return c.done("worst det relative error " + fmt(worst_det) + "; bounds held incl. " +
                std::to_string(singular_checked) + " eigen-singular mu");
}

Outcome certificate_soundness() {
  oracle::Rng rng(1010);
  Check c;
  int certified = 0, points = 0;
  double min_margin = INFINITY;
  for (int draw = 0; draw < 20; ++draw) {
    const int n = rng.integer(1, 4);
    const int d = rng.integer(n, 16);
    json zeros = json::array();
    for (int j = 0; j < n; ++j) zeros.push_back({rng.uniform(-15, 15), rng.uniform(1.0, 4.0)});
    const CMatrix u = rng.orthonormal(n, n);
    json unitary = json::array();
    for (int r = 0; r < n; ++r) {
      json row = json::array();
      for (int col = 0; col < n; ++col) row.push_back({u(r, col).real(), u(r, col).imag()});
      unitary.push_back(row);
    }
    const op::FiniteRankSpec spec(rng.orthonormal(d, n),
                                  op::make_family("blaschke_diagonal", {{"zeros", zeros}, {"unitary", unitary}}, n),
                                  {1.0, 0, 0.0});
    std::vector<double> xs;
    for (double x = -25; x <= 25; x += 2.5) xs.push_back(x);
    const auto rep = op::inverse_norm_certificates(spec, xs);
    ++certified;
    for (const auto& cert : rep.certificates) {
      const CMatrix dense = spec.assembled({cert.x, 0.5});
      const double direct = oracle::spectral_norm(Eigen::FullPivLU<CMatrix>(dense).inverse());
      min_margin = std::min(min_margin, cert.norm_bound / direct);
      ++points;
      c.require(cert.norm_bound >= direct, "norm_bound " + fmt(cert.norm_bound) + " < direct " + fmt(direct) +
                                               " at x = " + fmt(cert.x));
    }
  }
  const op::FiniteRankSpec unitary(CMatrix::Identity(3, 2), op::make_family("unitary_phase", {{"c", 1.5}}, 2), {});
  double worst = 0.0;
  for (double x = -40; x <= 40; x += 0.37) {
    const double dev = std::abs(std::abs(op::fredholm_det(unitary, {x, 0.0})) - 1.0);
    worst = std::max(worst, dev);
    c.require(dev <= 1e-10, "||a(x)| - 1| = " + fmt(dev) + " at x = " + fmt(x));
  }
  return c.done(std::to_string(certified) + " specs, " + std::to_string(points) + " points, min bound/direct " +
                fmt(min_margin) + "; unitary ||a(x)| - 1| <= " + fmt(worst));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome negative_path() {
  Check c;
  const std::filesystem::path work = std::filesystem::temp_directory_path() / "stripbound_acceptance";
  std::filesystem::remove_all(work);
  std::filesystem::create_directories(work);
  const std::string cli = STRIPBOUND_CLI_PATH;
  const std::string config = (work / "config.json").string();
  const std::string construct = "\"" + cli + "\" --out \"" + work.string() +
                                "\" construct prop23 --rho \"1/(1+x)\" -n 4 > /dev/null 2>&1";
  c.require(std::system(construct.c_str()) == 0, "construct failed");

  const std::vector<std::pair<std::string, std::string>> subjects = {
      {"strip", "certify strip --config \"" + config + "\""},
      {"dyadic", "certify dyadic --config \"" + config + "\""},
      {"nevanlinna", "certify nevanlinna --config \"" + config + "\""},
      {"operator", "certify operator --family zero --rank 2 --dim 3"},
      {"operator-blaschke", "certify operator --family blaschke_diagonal --params '{\"zeros\": [[2, 2]]}' --rank 1 --dim 2"}};
  for (const auto& [name, args] : subjects) {
    const std::string err = (work / (name + ".err")).string();
    const std::string base = "\"" + cli + "\" --out \"" + (work / name).string() + "\" " + args;
    const int clean = std::system((base + " > /dev/null 2>&1").c_str());
    c.require(clean == 0, name + ": clean run exited " + std::to_string(clean));
    const int status = std::system((base + " --inject-zero 5.25,0.5 > /dev/null 2> \"" + err + "\"").c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    c.require(code == 4, name + ": exit code " + std::to_string(code) + " instead of 4");
    const std::string msg = slurp(err);
    c.require(msg.find("5.25+0.5i") != std::string::npos, name + ": message does not name the zero: " + msg);
  }
  return c.done(std::to_string(subjects.size()) + " subjects exit 4 naming 5.25+0.5i");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"unimodularity of random products on the real line", unimodularity},
      {"reproduction of the normalized construction with rho = 1/(1+log(1+x))", normalized_reproduction},
      {"modified-factor tail law |log B(s,z)| <= 8|z|^2/s^3", tail_law},
      {"Poisson reconstruction of (z+2i)/(z+i)", poisson_reconstruction},
      {"uniqueness integral of e^{iz} equals pi/2", uniqueness_closed_form},
      {"Carleman residual stability over r in {10, 20, 40, 80}", carleman_stability},
      {"dyadic estimate against brute force", dyadic_oracle},
      {"finite-rank solve against dense solve", finite_rank_oracle},
      {"determinant, det bound and regularized inverse bound", determinant_suite},
      {"inverse-norm certificate soundness", certificate_soundness},
      {"injected strip zero exits 4 naming the zero", negative_path},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %zu %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
