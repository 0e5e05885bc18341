// stripbound command-line front end.
//
// Exit codes: 0 success, 2 construction failure, 3 evaluation failure,
// 4 hypothesis violation, 64 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "report.hpp"
#include "stripbound/blaschke.hpp"
#include "stripbound/certify.hpp"
#include "stripbound/error.hpp"
#include "stripbound/factorization.hpp"
#include "stripbound/io.hpp"
#include "stripbound/operator.hpp"

namespace fs = std::filesystem;
namespace sb = stripbound;
namespace cli = stripbound::cli;
using nlohmann::json;
using sb::Complex;

namespace {

constexpr int kExitConstruction = 2;
constexpr int kExitEvaluation = 3;
constexpr int kExitHypothesis = 4;
constexpr int kExitUsage = 64;

struct Args {
  // Global.
  double tol = 1e-10;
  int max_subdiv = 20000;
  double tail_radius = 1e6;
  std::string out = ".";
  std::string manifest;

  // Shared subject selection.
  std::string model;
  std::string config;
  std::string zeros;
  std::string grid;
  std::string xs;
  std::string inject;
  double p = 2.0;
  double sep_k = 1.0;
  double sep_c = 1.0;

  // construct
  std::string kind;
  std::string rho;
  int n = 0;
  double beta = 1.5;
  double abscissa_cap = 1e15;

  // eval
  std::vector<std::string> points;
  double tail_tol = 1e-6;

  // profile
  bool plot = false;
  bool at_nodes = false;

  // operator
  std::string spec;
  std::string family;
  std::string params = "{}";
  int rank = 1;
  int dim = 1;
  double growth_c = 1.0;
  int growth_m = 0;
  double growth_alpha = 0.0;
  std::string eps = "0.01,0.1,1";
  bool witness = false;
  double witness_k = 1.0;
  double witness_c = 1.0;
  double floor_scale = sb::op::kDetFloorScale;
  std::string z = "0,0.5";
  std::string g;

  // nevanlinna
  double a = 0.0;
  std::string boundary = "one";

  // carleman
  std::string radii = "10,20,40,80";
};

struct Context {
  const Args& args;
  fs::path out;
  sb::QuadratureSpec quad;
  cli::RunRecord& run;

  void write_json(const std::string& name, json j) {
    sb::io::write_json_file(out / name, j);
    run.outputs.push_back(name);
  }
  void write_text(const std::string& name, const std::string& text) {
    cli::write_text(out / name, text);
    run.outputs.push_back(name);
  }
  void write_csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
    cli::write_csv(out / name, header, rows);
    run.outputs.push_back(name);
  }
};

std::string describe(Complex z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

std::vector<double> abscissae(const Args& a, const std::string& fallback_grid) {
  if (!a.xs.empty() && !a.grid.empty()) throw sb::InvalidInput("give at most one of --xs or --grid");
  if (!a.xs.empty()) return cli::parse_list(a.xs);
  return cli::parse_grid(a.grid.empty() ? fallback_grid : a.grid);
}

sb::SeparationParams separation(const Args& a) {
  sb::SeparationParams p;
  p.k = a.sep_k;
  p.c_sep = a.sep_c;
  p.validate();
  return p;
}

std::optional<Complex> injected_zero(const Args& a) {
  if (a.inject.empty()) return std::nullopt;
  const Complex w = cli::parse_point(a.inject);
  if (!(w.imag() > 0.0)) throw sb::InvalidInput("--inject-zero needs Im > 0");
  return w;
}

sb::ZeroSet zero_set_from_args(const Args& a) {
  if (!a.zeros.empty() && !a.config.empty()) throw sb::InvalidInput("give at most one of --zeros or --config");
  sb::ZeroSet zs;
  if (!a.zeros.empty()) zs = sb::io::zero_set_from_json(sb::io::read_json_file(a.zeros));
  if (!a.config.empty()) zs = sb::io::product_config_from_json(sb::io::read_json_file(a.config)).zero_set();
  if (auto w = injected_zero(a)) zs = zs.merged_with(sb::make_zero_set({{*w, 1.0}}));
  return zs;
}

sb::op::FiniteRankSpec spec_from_args(const Args& a) {
  if (!a.spec.empty()) {
    if (!a.family.empty()) throw sb::InvalidInput("give at most one of --spec or --family");
    return sb::io::finite_rank_spec_from_json(sb::io::read_json_file(a.spec));
  }
  if (a.family.empty()) throw sb::InvalidInput("give --spec FILE or --family NAME");
  if (a.rank < 1 || a.dim < a.rank) throw sb::InvalidInput("need 1 <= --rank <= --dim");
  json params;
  try {
    params = json::parse(a.params);
  } catch (const json::exception& e) {
    throw sb::InvalidInput(std::string("--params is not valid JSON: ") + e.what());
  }
  sb::GrowthEnvelope growth{a.growth_c, a.growth_m, a.growth_alpha};
  return sb::op::FiniteRankSpec(sb::op::CMatrix::Identity(a.dim, a.rank),
                                sb::op::make_family(a.family, params, a.rank), growth);
}

// I + A' = (I + A) diag(b, 1, ..., 1) with b the Blaschke factor vanishing at w.
sb::op::FiniteRankSpec inject_operator_zero(const sb::op::FiniteRankSpec& spec, Complex w) {
  sb::op::CoefficientFamily fam = spec.coefficients();
  const auto inner = fam.eval;
  const int n = spec.rank();
  fam.family += "+injected_zero";
  fam.eval = [inner, w, n](Complex z) {
    sb::op::CMatrix m = sb::op::CMatrix::Identity(n, n) + inner(z);
    m.col(0) *= (z - w) / (z - std::conj(w));
    return (m - sb::op::CMatrix::Identity(n, n)).eval();
  };
  if (fam.determinant_zeros) fam.determinant_zeros->push_back(w);
  return sb::op::FiniteRankSpec(spec.basis(), fam, spec.growth());
}

std::string count_str(double k) { return sb::io::count_to_json(k).dump(); }

// construct ---------------------------------------------------------------

int cmd_construct(Context& ctx) {
  const Args& a = ctx.args;
  const sb::RateFunction rho = cli::parse_rate(a.rho);
  if (a.n < 1) throw sb::InvalidInput("-n must be >= 1");
  sb::blaschke::ConstructOptions opt;
  opt.abscissa_cap = a.abscissa_cap;
  sb::blaschke::ProductConfig cfg;
  if (a.kind == "prop23") {
    cfg = sb::blaschke::construct_prop23(rho, a.n, opt);
  } else {
    if (!(a.beta > 1.0 && a.beta < 2.0)) throw sb::InvalidInput("--beta must lie in the open interval (1, 2)");
    cfg = sb::blaschke::construct_prop25(rho, a.beta, a.n, opt);
  }
  ctx.write_json("config.json", sb::io::to_json(cfg));
  std::cout << std::left << std::setw(6) << "n" << std::setw(24) << "x" << "k\n";
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
    std::cout << std::setw(6) << i + 1 << std::setw(24) << count_str(cfg.nodes[i].x)
              << count_str(cfg.nodes[i].exponent) << "\n";
  }
  return 0;
}

// eval --------------------------------------------------------------------

int cmd_eval(Context& ctx) {
  const Args& a = ctx.args;
  const auto src = cli::resolve_model(a.model, a.config);
  json points = json::array();
  std::cout << std::left << std::setw(28) << "z" << std::setw(26) << "log|f|" << "arg f\n";
  for (const auto& s : a.points) {
    const Complex z = cli::parse_point(s);
    json row = {{"z", sb::io::complex_to_json(z)}};
    sb::LogValue v;
    if (src.config) {
      const auto pv = sb::blaschke::product_eval(*src.config, z, a.tail_tol);
      v = pv.log_value;
      row["tail_bound"] = sb::io::real_to_json(pv.tail.value);
      row["tail_certified"] = pv.tail_certified;
    } else {
      v = src.model(z);
    }
    row["log_modulus"] = sb::io::real_to_json(v.log_modulus);
    row["phase"] = sb::io::real_to_json(v.phase);
    points.push_back(std::move(row));
    std::cout << std::setw(28) << describe(z) << std::setw(26) << cli::format_real(v.log_modulus)
              << cli::format_real(v.phase) << "\n";
  }
  ctx.write_json("eval.json", {{"schema", sb::io::kSchemaEval}, {"model", src.label}, {"points", points}});
  return 0;
}

// profile -----------------------------------------------------------------

int cmd_profile(Context& ctx) {
  const Args& a = ctx.args;
  const auto src = cli::resolve_model(a.model, a.config);
  if (!(std::isfinite(a.p) && a.p > 0.0)) throw sb::InvalidInput("--p must be > 0");
  std::vector<double> xs;
  if (a.at_nodes) {
    if (!src.config) throw sb::InvalidInput("--at-nodes needs --config");
    if (!a.grid.empty() || !a.xs.empty()) throw sb::InvalidInput("--at-nodes excludes --grid and --xs");
    for (const auto& node : src.config->nodes) xs.push_back(node.x);
  } else {
    xs = abscissae(a, "1:2:20");
  }
  std::vector<std::vector<double>> rows;
  int failures = 0;
  for (double x : xs) {
    double logmod = std::nan(""), ratio = std::nan("");
    try {
      logmod = src.model.log_modulus(Complex{x, 0.5});
      ratio = logmod / std::pow(x, a.p);
      if (!std::isfinite(logmod)) throw sb::EvaluationError("f vanishes on the midline");
    } catch (const sb::Error& e) {
      ++failures;
      std::cerr << "row x = " << cli::format_real(x) << ": " << e.what() << "\n";
    }
    rows.push_back({x, logmod, ratio});
  }
  ctx.write_csv("profile.csv", {"x", "logmod", "ratio"}, rows);
  if (a.plot) {
    cli::Series s{"log|f(x+i/2)| / x^" + cli::format_real(a.p), {}, {}};
    for (const auto& r : rows) {
      s.x.push_back(r[0]);
      s.y.push_back(r[2]);
    }
    ctx.write_text("profile.svg", cli::svg_line_plot("Ratio profile: " + src.label, "x", "ratio", {s}));
  }
  for (const auto& r : rows) {
    std::cout << cli::format_real(r[0]) << "," << cli::format_real(r[1]) << "," << cli::format_real(r[2]) << "\n";
  }
  return failures ? kExitEvaluation : 0;
}

// certify -----------------------------------------------------------------

int cmd_certify_strip(Context& ctx) {
  const Args& a = ctx.args;
  auto src = cli::resolve_model(a.model, a.config);
  sb::FunctionModel model = src.model;
  if (auto w = injected_zero(a)) model = model * sb::FunctionModel::rational(1.0, {*w}, {std::conj(*w)});
  const auto strip_zeros = model.strip_zeros();
  if (!strip_zeros.empty()) {
    throw sb::HypothesisViolation("hypothesis violated: f vanishes in the strip 0 < Im z < 1 at z = " +
                                  describe(strip_zeros.front().position));
  }
  const auto xs = abscissae(a, "1:2:12");
  const auto profile = sb::certify::strip_ratio_profile(model, xs, a.p);
  json report = {{"schema", sb::io::kSchemaStripReport},
                 {"model", src.label},
                 {"zero_free_strip", true},
                 {"known_zeros_checked", model.known_zeros().size()},
                 {"profile", sb::io::to_json(profile)}};
  ctx.write_json("strip_report.json", report);
  std::cout << "strip 0 < Im z < 1 free of the " << model.known_zeros().size() << " known zero(s); min ratio "
            << cli::format_real(profile.min_ratio) << "\n";
  return 0;
}

int cmd_certify_dyadic(Context& ctx) {
  const Args& a = ctx.args;
  const sb::ZeroSet zs = zero_set_from_args(a);
  const sb::SeparationParams sep = separation(a);
  sb::certify::check_dyadic_hypotheses(zs, sep);
  const auto xs = abscissae(a, "10:10:3");
  json reports = json::array();
  std::vector<std::vector<double>> rows;
  std::cout << std::left << std::setw(16) << "x" << "total\n";
  for (double x : xs) {
    const auto r = sb::certify::dyadic_estimate(zs, x, sep);
    reports.push_back(sb::io::to_json(r));
    if (r.annuli.empty()) rows.push_back({x, std::nan(""), 0, 0, 0, r.total});
    for (const auto& an : r.annuli) {
      rows.push_back({x, static_cast<double>(an.n), static_cast<double>(an.card), an.mass, an.sum, r.total});
    }
    std::cout << std::setw(16) << cli::format_real(x) << cli::format_real(r.total) << "\n";
  }
  ctx.write_json("dyadic_report.json", {{"schema", sb::io::kSchemaDyadicReport},
                                        {"zero_count", zs.size()},
                                        {"separation", sb::io::to_json(sep)},
                                        {"reports", reports}});
  ctx.write_csv("dyadic_report.csv", {"x", "n", "card", "A_n", "B_n", "total"}, rows);
  return 0;
}

int cmd_certify_operator(Context& ctx) {
  const Args& a = ctx.args;
  sb::op::FiniteRankSpec spec = spec_from_args(a);
  json spec_json = sb::io::to_json(spec);
  sb::op::CertificateOptions opt;
  opt.floor_scale = a.floor_scale;
  opt.epsilons = cli::parse_list(a.eps);
  if (auto w = injected_zero(a)) {
    spec = inject_operator_zero(spec, *w);
    opt.strip.x_min = std::min(opt.strip.x_min, std::floor(w->real()) - 1.0);
    opt.strip.x_max = std::max(opt.strip.x_max, std::ceil(w->real()) + 1.0);
  }
  if (a.witness) opt.witness = sb::op::SeparationWitness{sb::SeparationParams{a.witness_k, a.witness_c, 0.0}, {}};
  const std::vector<double> xs = a.grid.empty() && a.xs.empty()
                                     ? std::vector<double>{-20, -10, -5, -2, -1, 0, 1, 2, 5, 10, 20}
                                     : abscissae(a, "");
  const auto rep = sb::op::inverse_norm_certificates(spec, xs, opt);
  json report = sb::io::to_json(rep);
  report["schema"] = sb::io::kSchemaOperatorReport;
  report["spec"] = spec_json;
  if (!a.inject.empty()) report["injected_zero"] = sb::io::complex_to_json(cli::parse_point(a.inject));
  report["det_floor_scale"] = opt.floor_scale;
  ctx.write_json("operator_certificate.json", report);
  std::cout << std::left << std::setw(12) << "x" << std::setw(26) << "det_lower_bound" << "norm_bound\n";
  for (const auto& c : rep.certificates) {
    std::cout << std::setw(12) << cli::format_real(c.x) << std::setw(26) << cli::format_real(c.det_lower_bound)
              << cli::format_real(c.norm_bound) << "\n";
  }
  std::cout << "regime " << sb::op::to_string(rep.regime) << " (" << rep.regime_note << ")\n";
  return 0;
}

int cmd_certify_nevanlinna(Context& ctx) {
  const Args& a = ctx.args;
  sb::factorization::NevanlinnaParts parts;
  parts.a = a.a;
  parts.zeros = zero_set_from_args(a);
  parts.boundary = cli::parse_boundary(a.boundary);
  const auto xs = abscissae(a, "1:2:10");
  const auto bounds = sb::certify::certify_prop26(parts, xs, separation(a), ctx.quad);
  json rows = json::array();
  std::cout << std::left << std::setw(16) << "x" << std::setw(26) << "bound" << "certified\n";
  for (const auto& b : bounds) {
    rows.push_back(sb::io::to_json(b));
    std::cout << std::setw(16) << cli::format_real(b.x) << std::setw(26) << cli::format_real(b.bound)
              << (b.certified ? "yes" : "no") << "\n";
  }
  ctx.write_json("nevanlinna_report.json", {{"schema", sb::io::kSchemaNevanlinnaReport},
                                            {"a", parts.a},
                                            {"boundary", a.boundary},
                                            {"zero_count", parts.zeros.size()},
                                            {"separation", sb::io::to_json(separation(a))},
                                            {"bounds", rows}});
  return 0;
}

// operator-solve ----------------------------------------------------------

int cmd_operator_solve(Context& ctx) {
  const Args& a = ctx.args;
  const auto spec = spec_from_args(a);
  const Complex z = cli::parse_point(a.z);
  sb::op::CVector g = sb::op::CVector::Ones(spec.ambient_dim());
  if (!a.g.empty()) {
    const json gj = sb::io::read_json_file(a.g);
    if (!gj.is_array() || static_cast<int>(gj.size()) != spec.ambient_dim()) {
      throw sb::InvalidInput("--g must hold an array of " + std::to_string(spec.ambient_dim()) + " entries");
    }
    for (int i = 0; i < spec.ambient_dim(); ++i) g(i) = sb::io::complex_from_json(gj[i], "g entry");
  }
  const auto r = sb::op::finite_rank_solve(spec, z, g, a.floor_scale);
  json f = json::array();
  for (int i = 0; i < r.f.size(); ++i) f.push_back(sb::io::complex_to_json(r.f(i)));
  ctx.write_json("operator_solve.json", {{"schema", sb::io::kSchemaSolve},
                                         {"z", sb::io::complex_to_json(z)},
                                         {"det", sb::io::complex_to_json(r.det)},
                                         {"residual", sb::io::real_to_json(r.residual)},
                                         {"f", f}});
  std::cout << "det(I + A(z)) = " << describe(r.det) << "\nresidual " << cli::format_real(r.residual) << "\n";
  return 0;
}

// carleman ----------------------------------------------------------------

int cmd_carleman(Context& ctx) {
  const Args& a = ctx.args;
  const auto src = cli::resolve_model(a.model, a.config);
  json terms = json::array();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::cout << std::left << std::setw(10) << "r" << std::setw(26) << "arc" << std::setw(26) << "boundary"
            << std::setw(26) << "zeros" << "residual\n";
  for (double r : cli::parse_list(a.radii)) {
    const auto t = sb::factorization::carleman_functional(src.model, r, ctx.quad);
    terms.push_back(sb::io::to_json(t));
    lo = std::min(lo, t.residual);
    hi = std::max(hi, t.residual);
    std::cout << std::setw(10) << cli::format_real(r) << std::setw(26) << cli::format_real(t.arc_term)
              << std::setw(26) << cli::format_real(t.boundary_term) << std::setw(26)
              << cli::format_real(t.zero_term) << cli::format_real(t.residual) << "\n";
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  const double spread = scale > 0.0 ? (hi - lo) / scale : 0.0;
  ctx.write_json("carleman.json", {{"schema", sb::io::kSchemaCarleman},
                                   {"model", src.label},
                                   {"terms", terms},
                                   {"residual_relative_spread", sb::io::real_to_json(spread)}});
  return 0;
}

// wiring ------------------------------------------------------------------

void add_model_options(CLI::App* sub, Args& a) {
  sub->add_option("--model", a.model, "one, exp_iz, exp:A, blaschke:RE,IM, outer, config:PATH");
  sub->add_option("--config", a.config, "ProductConfig JSON file");
}

void add_grid_options(CLI::App* sub, Args& a) {
  sub->add_option("--grid", a.grid, "geometric grid x0:factor:count");
  sub->add_option("--xs", a.xs, "comma-separated abscissae");
}

void add_separation_options(CLI::App* sub, Args& a) {
  sub->add_option("--k", a.sep_k, "sector slope k")->capture_default_str();
  sub->add_option("--c-sep", a.sep_c, "separation constant")->capture_default_str();
}

void add_spec_options(CLI::App* sub, Args& a) {
  sub->add_option("--spec", a.spec, "FiniteRankSpec JSON file");
  sub->add_option("--family", a.family, "registered coefficient family (basis = first N unit vectors)");
  sub->add_option("--params", a.params, "family parameters as JSON")->capture_default_str();
  sub->add_option("--rank", a.rank, "N")->capture_default_str();
  sub->add_option("--dim", a.dim, "D")->capture_default_str();
  sub->add_option("--growth-c", a.growth_c)->capture_default_str();
  sub->add_option("--growth-m", a.growth_m)->capture_default_str();
  sub->add_option("--growth-alpha", a.growth_alpha)->capture_default_str();
  sub->add_option("--floor-scale", a.floor_scale, "determinant floor scale")->capture_default_str();
}

int exit_code(const sb::Error& e) {
  switch (e.kind()) {
    case sb::ErrorKind::kInvalidInput: return kExitUsage;
    case sb::ErrorKind::kConstruction: return kExitConstruction;
    case sb::ErrorKind::kEvaluation: return kExitEvaluation;
    case sb::ErrorKind::kHypothesis: return kExitHypothesis;
  }
  return kExitEvaluation;
}

// Drops --out / --manifest (and their values) from the recorded argv.
std::vector<std::string> reproducible_argv(const std::vector<std::string>& argv) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    const std::string& s = argv[i];
    if (s == "--out" || s == "--manifest") {
      ++i;
      continue;
    }
    if (s.rfind("--out=", 0) == 0 || s.rfind("--manifest=", 0) == 0) continue;
    out.push_back(s);
  }
  return out;
}

json subcommand_parameters(const CLI::App* sub) {
  json p = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_name();
    if (name.empty() || name == "--help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      p[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else if (!opt->get_default_str().empty()) {
      p[name] = opt->get_default_str();
    }
  }
  return p;
}

int run(const std::vector<std::string>& argv, int depth = 0) {
  Args a;
  CLI::App app{"Bounds for holomorphic functions zero-free in the strip 0 < Im z < 1", "stripbound"};
  app.set_version_flag("--version", STRIPBOUND_VERSION);
  app.require_subcommand(0, 1);
  app.add_option("--tol", a.tol, "quadrature absolute tolerance")->capture_default_str();
  app.add_option("--max-subdiv", a.max_subdiv, "quadrature subdivision budget")->capture_default_str();
  app.add_option("--tail-radius", a.tail_radius, "quadrature truncation radius")->capture_default_str();
  app.add_option("--out", a.out, "output directory")->capture_default_str();
  app.add_option("--manifest", a.manifest, "re-run the command recorded in a manifest");

  auto* construct = app.add_subcommand("construct", "build a counterexample product");
  construct->add_option("kind", a.kind, "prop23 or prop25")->required()->check(CLI::IsMember({"prop23", "prop25"}));
  construct->add_option("--rho", a.rho, "rate: 1/(1+x)[^p], 1/(1+log(1+x))[^p], const:V, table:PATH")->required();
  construct->add_option("-n,--terms", a.n, "number of nodes")->required();
  construct->add_option("--beta", a.beta, "growth order for prop25, in (1, 2)")->capture_default_str();
  construct->add_option("--abscissa-cap", a.abscissa_cap, "largest node abscissa searched")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "evaluate a model at points");
  add_model_options(eval, a);
  eval->add_option("--z", a.points, "point re,im (repeatable)")->required();
  eval->add_option("--tail-tol", a.tail_tol, "tail tolerance for stored products")->capture_default_str();

  auto* profile = app.add_subcommand("profile", "ratio profile log|f(x+i/2)| / x^p");
  add_model_options(profile, a);
  add_grid_options(profile, a);
  profile->add_option("--p", a.p, "exponent p")->capture_default_str();
  profile->add_flag("--at-nodes", a.at_nodes, "use the node abscissae of --config");
  profile->add_flag("--plot", a.plot, "also write profile.svg");

  auto* certify = app.add_subcommand("certify", "certify a subject");
  certify->require_subcommand(1);
  auto* strip = certify->add_subcommand("strip", "zero-free strip and ratio profile of a model");
  add_model_options(strip, a);
  add_grid_options(strip, a);
  strip->add_option("--p", a.p, "exponent p")->capture_default_str();
  auto* dyadic = certify->add_subcommand("dyadic", "dyadic estimate for a separated zero set");
  dyadic->add_option("--zeros", a.zeros, "ZeroSet JSON file");
  dyadic->add_option("--config", a.config, "use the zeros of a ProductConfig");
  add_grid_options(dyadic, a);
  add_separation_options(dyadic, a);
  auto* oper = certify->add_subcommand("operator", "inverse-norm certificates for I + B(z)");
  add_spec_options(oper, a);
  add_grid_options(oper, a);
  oper->add_option("--eps", a.eps, "epsilon list for the envelopes")->capture_default_str();
  oper->add_flag("--witness", a.witness, "try the separation witness for the linear regime");
  oper->add_option("--witness-k", a.witness_k)->capture_default_str();
  oper->add_option("--witness-c-sep", a.witness_c)->capture_default_str();
  auto* nev = certify->add_subcommand("nevanlinna", "lower bounds for e^{iaz} B F on the midline");
  nev->add_option("--a", a.a, "exponential rate a >= 0")->capture_default_str();
  nev->add_option("--zeros", a.zeros, "ZeroSet JSON file");
  nev->add_option("--config", a.config, "use the zeros of a ProductConfig");
  nev->add_option("--boundary", a.boundary, "outer boundary data: one or outer")->capture_default_str();
  add_grid_options(nev, a);
  add_separation_options(nev, a);
  for (auto* sub : {strip, dyadic, oper, nev}) {
    sub->add_option("--inject-zero", a.inject, "add a zero at re,im before certifying");
  }

  auto* solve = app.add_subcommand("operator-solve", "solve (I + B(z)) f = g");
  add_spec_options(solve, a);
  solve->add_option("--z", a.z, "point re,im")->capture_default_str();
  solve->add_option("--g", a.g, "JSON file with the right-hand side as an array of [re, im]");

  auto* carleman = app.add_subcommand("carleman", "Carleman identity terms");
  add_model_options(carleman, a);
  carleman->add_option("--r", a.radii, "comma-separated radii")->capture_default_str();

  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (!a.manifest.empty()) {
    if (!app.get_subcommands().empty()) throw sb::InvalidInput("--manifest cannot be combined with a subcommand");
    if (depth > 0) throw sb::InvalidInput("manifest re-runs cannot nest");
    const json m = sb::io::read_json_file(a.manifest);
    if (!m.is_object() || m.value("schema", "") != sb::io::kSchemaManifest || !m.contains("argv")) {
      throw sb::InvalidInput(a.manifest + " is not a stripbound manifest");
    }
    std::vector<std::string> replay = m.at("argv").get<std::vector<std::string>>();
    replay.insert(replay.begin(), {"--out", a.out});
    return run(replay, depth + 1);
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }

  cli::RunRecord record;
  record.argv = reproducible_argv(argv);
  record.quadrature.abs_tol = a.tol;
  record.quadrature.max_subdivisions = a.max_subdiv;
  record.quadrature.tail_radius = a.tail_radius;
  record.quadrature.validate();

  const CLI::App* leaf = app.get_subcommands().front();
  std::string command = leaf->get_name();
  while (!leaf->get_subcommands().empty()) {
    leaf = leaf->get_subcommands().front();
    command += " " + leaf->get_name();
  }
  record.command = command;
  record.parameters = subcommand_parameters(leaf);

  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw sb::InvalidInput("cannot create output directory " + a.out + ": " + ec.message());
  Context ctx{a, fs::path(a.out), record.quadrature, record};

  int code = 0;
  if (leaf == construct) code = cmd_construct(ctx);
  else if (leaf == eval) code = cmd_eval(ctx);
  else if (leaf == profile) code = cmd_profile(ctx);
  else if (leaf == strip) code = cmd_certify_strip(ctx);
  else if (leaf == dyadic) code = cmd_certify_dyadic(ctx);
  else if (leaf == oper) code = cmd_certify_operator(ctx);
  else if (leaf == nev) code = cmd_certify_nevanlinna(ctx);
  else if (leaf == solve) code = cmd_operator_solve(ctx);
  else if (leaf == carleman) code = cmd_carleman(ctx);

  sb::io::write_json_file(ctx.out / "manifest.json", cli::manifest_json(record));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const sb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEvaluation;
  }
}
