#include "stripbound/io.hpp"

#include <cmath>
#include <fstream>

#include "stripbound/error.hpp"

namespace stripbound::io {

namespace {

constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53

double number(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
    throw InvalidInput(std::string(what) + ": missing numeric field \"" + key + "\"");
  }
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback, const char* what) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number(j, key, what);
}

void check_schema(const json& j, const char* expected) {
  if (j.is_object() && j.contains("schema")) {
    if (!j.at("schema").is_string() || j.at("schema").get<std::string>() != expected) {
      throw InvalidInput(std::string("schema mismatch: expected ") + expected);
    }
  }
}

// NaN and infinities are not JSON numbers; they are written as strings.
json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

json count_to_json(double k) {
  if (std::abs(k) <= kExactIntegerLimit && std::floor(k) == k) return static_cast<long long>(k);
  return real(k);
}

json real_to_json(double v) { return real(v); }

json complex_to_json(Complex z) { return json::array({real(z.real()), real(z.imag())}); }

Complex complex_from_json(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object() && j.contains("re") && j.contains("im")) {
    return {number(j, "re", what), number(j, "im", what)};
  }
  throw InvalidInput(std::string(what) + ": expected [re, im]");
}

json to_json(const ZeroSet& zs) {
  json arr = json::array();
  for (const auto& e : zs.entries()) {
    arr.push_back({{"re", e.position.real()}, {"im", e.position.imag()}, {"mult", count_to_json(e.multiplicity)}});
  }
  return {{"schema", kSchemaZeroSet}, {"zeros", std::move(arr)}};
}

ZeroSet zero_set_from_json(const json& j) {
  check_schema(j, kSchemaZeroSet);
  const json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("zeros")) throw InvalidInput("zero set document needs \"zeros\"");
    arr = &j.at("zeros");
  }
  if (!arr->is_array()) throw InvalidInput("zero set must be an array");
  std::vector<ZeroEntry> raw;
  for (const auto& e : *arr) {
    raw.push_back({Complex{number(e, "re", "zero"), number(e, "im", "zero")}, number_or(e, "mult", 1.0, "zero")});
  }
  return make_zero_set(std::move(raw));
}

json to_json(const GrowthEnvelope& g) { return {{"c", g.c}, {"m", g.m}, {"alpha", g.alpha}}; }

GrowthEnvelope growth_from_json(const json& j) {
  GrowthEnvelope g;
  g.c = number_or(j, "c", g.c, "growth");
  const double m = number_or(j, "m", 0.0, "growth");
  if (std::floor(m) != m || std::abs(m) > 1e6) throw InvalidInput("growth exponent m must be an integer");
  g.m = static_cast<int>(m);
  g.alpha = number_or(j, "alpha", g.alpha, "growth");
  g.validate();
  return g;
}

json to_json(const SeparationParams& p) { return {{"k", p.k}, {"c_sep", p.c_sep}, {"d", p.d}}; }

SeparationParams separation_from_json(const json& j) {
  SeparationParams p;
  p.k = number_or(j, "k", p.k, "separation");
  p.c_sep = number_or(j, "c_sep", p.c_sep, "separation");
  p.d = number_or(j, "d", p.d, "separation");
  p.validate();
  return p;
}

json to_json(const QuadratureSpec& q) {
  return {{"abs_tol", q.abs_tol},
          {"rel_tol", q.rel_tol},
          {"max_subdivisions", q.max_subdivisions},
          {"tail_radius", q.tail_radius},
          {"divergence_threshold", q.divergence_threshold},
          {"log_floor", q.log_floor}};
}

json to_json(const blaschke::ProductConfig& cfg) {
  json nodes = json::array();
  for (const auto& n : cfg.nodes) nodes.push_back({{"x", count_to_json(n.x)}, {"k", count_to_json(n.exponent)}});
  json j = {{"schema", kSchemaProductConfig}, {"kind", blaschke::to_string(cfg.kind)}, {"nodes", std::move(nodes)}};
  if (cfg.tail_law) j["tail_law"] = {{"exponent", cfg.tail_law->exponent}};
  if (!cfg.rate_name.empty()) j["rate"] = cfg.rate_name;
  if (cfg.beta) j["beta"] = *cfg.beta;
  return j;
}

blaschke::ProductConfig product_config_from_json(const json& j) {
  check_schema(j, kSchemaProductConfig);
  if (!j.is_object()) throw InvalidInput("product config must be an object");
  blaschke::ProductConfig cfg;
  if (!j.contains("kind") || !j.at("kind").is_string()) throw InvalidInput("product config needs \"kind\"");
  cfg.kind = blaschke::factor_kind_from_string(j.at("kind").get<std::string>());
  if (!j.contains("nodes") || !j.at("nodes").is_array()) throw InvalidInput("product config needs \"nodes\"");
  for (const auto& n : j.at("nodes")) cfg.nodes.push_back({number(n, "x", "node"), number(n, "k", "node")});
  if (j.contains("tail_law")) cfg.tail_law = blaschke::TailLaw{number(j.at("tail_law"), "exponent", "tail_law")};
  if (j.contains("rate") && j.at("rate").is_string()) cfg.rate_name = j.at("rate").get<std::string>();
  if (j.contains("beta")) cfg.beta = number(j, "beta", "product config");
  cfg.validate();
  return cfg;
}

json to_json(const op::FiniteRankSpec& spec) {
  const auto& fam = spec.coefficients();
  if (fam.family.empty() || fam.family == "custom") {
    throw InvalidInput("only registered coefficient families can be serialized");
  }
  json basis = json::array();
  for (int c = 0; c < spec.rank(); ++c) {
    json col = json::array();
    for (int r = 0; r < spec.ambient_dim(); ++r) col.push_back(complex_to_json(spec.basis()(r, c)));
    basis.push_back(std::move(col));
  }
  return {{"schema", kSchemaFiniteRank},
          {"D", spec.ambient_dim()},
          {"basis", std::move(basis)},
          {"coeff", {{"family", fam.family}, {"params", fam.params}}},
          {"growth", to_json(spec.growth())}};
}

op::FiniteRankSpec finite_rank_spec_from_json(const json& j) {
  check_schema(j, kSchemaFiniteRank);
  const double d_raw = number(j, "D", "finite-rank spec");
  if (!(d_raw >= 1.0 && d_raw <= 4096.0 && std::floor(d_raw) == d_raw)) {
    throw InvalidInput("finite-rank spec: D must be an integer in [1, 4096]");
  }
  const int d = static_cast<int>(d_raw);
  if (!j.contains("basis") || !j.at("basis").is_array() || j.at("basis").empty()) {
    throw InvalidInput("finite-rank spec needs a non-empty \"basis\"");
  }
  const json& bj = j.at("basis");
  const int n = static_cast<int>(bj.size());
  op::CMatrix basis(d, n);
  for (int c = 0; c < n; ++c) {
    if (!bj[c].is_array() || static_cast<int>(bj[c].size()) != d) {
      throw InvalidInput("finite-rank spec: basis vector " + std::to_string(c) + " must have D entries");
    }
    for (int r = 0; r < d; ++r) basis(r, c) = complex_from_json(bj[c][r], "basis entry");
  }
  if (!j.contains("coeff") || !j.at("coeff").is_object() || !j.at("coeff").contains("family")) {
    throw InvalidInput("finite-rank spec needs \"coeff\": {\"family\", \"params\"}");
  }
  const json& cj = j.at("coeff");
  const json params = cj.contains("params") ? cj.at("params") : json::object();
  op::CoefficientFamily fam = op::make_family(cj.at("family").get<std::string>(), params, n);
  const GrowthEnvelope growth = j.contains("growth") ? growth_from_json(j.at("growth")) : GrowthEnvelope{};
  return op::FiniteRankSpec(std::move(basis), std::move(fam), growth);
}

json to_json(const Estimate& e) {
  return {{"value", real(e.value)}, {"error_estimate", real(e.error_estimate)}, {"flags", e.flags}};
}

json to_json(const certify::RatioProfile& p) {
  json rows = json::array();
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    const auto& s = p.samples[i];
    rows.push_back({{"x", s.x}, {"logmod", real(s.log_modulus)}, {"ratio", real(s.ratio)}, {"tail_sup", real(p.tail_sup[i])}});
  }
  return {{"exponent", p.exponent}, {"min_ratio", real(p.min_ratio)}, {"samples", std::move(rows)}};
}

json to_json(const certify::DyadicReport& r) {
  json annuli = json::array();
  for (const auto& a : r.annuli) {
    annuli.push_back({{"n", a.n},
                      {"card", a.card},
                      {"multiplicity_count", count_to_json(a.multiplicity_count)},
                      {"mass", a.mass},
                      {"sum", a.sum}});
  }
  return {{"x", r.x},
          {"m", r.m},
          {"annuli", std::move(annuli)},
          {"far_count", r.far_count},
          {"near_count", r.near_count},
          {"far_sum", r.far_sum},
          {"near_sum", r.near_sum},
          {"total", r.total},
          {"max_multiplicity", count_to_json(r.max_multiplicity)},
          {"constants",
           {{"c1_card", r.constants.c1_card},
            {"c1_mass", r.constants.c1_mass},
            {"c1", r.constants.c1},
            {"c2", r.constants.c2},
            {"c3", r.constants.c3}}}};
}

json to_json(const certify::Prop26Bound& b) {
  json j = {{"x", b.x},
            {"exponential_term", real(b.exponential_term)},
            {"outer_inner", real(b.outer_inner)},
            {"outer_complement", real(b.outer_complement)},
            {"blaschke_term", real(b.blaschke_term)},
            {"blaschke_exact", real(b.blaschke_exact)},
            {"dyadic_total", real(b.dyadic_total)},
            {"bound", real(b.bound)},
            {"certified", b.certified},
            {"flags", b.flags}};
  j["outer_tail"] = b.outer_tail ? real(*b.outer_tail) : json(nullptr);
  return j;
}

json to_json(const factorization::CarlemanTerms& t) {
  return {{"radius", t.radius},
          {"arc_term", real(t.arc_term)},
          {"boundary_term", real(t.boundary_term)},
          {"zero_term", real(t.zero_term)},
          {"residual", real(t.residual)},
          {"error_estimate", real(t.error_estimate)},
          {"flags", t.flags}};
}

json to_json(const op::InverseCertificate& c) {
  return {{"x", c.x},
          {"det_lower_bound", real(c.det_lower_bound)},
          {"numerator_bound", real(c.numerator_bound)},
          {"norm_bound", real(c.norm_bound)},
          {"envelope", real(c.envelope)},
          {"cofactor_scale", real(c.cofactor_scale)},
          {"regime", op::to_string(c.regime)},
          {"provenance", c.provenance}};
}

json to_json(const op::CertificateReport& r) {
  json certs = json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  json profile = json::array();
  for (const auto& s : r.log_det_profile) {
    profile.push_back({{"x", s.x}, {"log_abs_det", real(s.log_abs_det)}, {"ratio", real(s.ratio)}});
  }
  json env = json::array();
  for (const auto& e : r.envelopes) env.push_back({{"epsilon", e.epsilon}, {"log_constant", real(e.log_constant)}});
  return {{"certificates", std::move(certs)},
          {"log_det_profile", std::move(profile)},
          {"epsilon_envelopes", std::move(env)},
          {"regime", op::to_string(r.regime)},
          {"regime_note", r.regime_note},
          {"min_strip_det", real(r.min_strip_det)},
          {"trace_growth_constant", real(r.trace_growth_constant)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace stripbound::io
