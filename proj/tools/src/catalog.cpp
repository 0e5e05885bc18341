#include "catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stripbound/certify.hpp"
#include "stripbound/error.hpp"
#include "stripbound/io.hpp"

namespace stripbound::cli {

namespace {

double parse_real(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InvalidInput(what + ": not a number: \"" + s + "\"");
  }
  if (pos != s.size()) throw InvalidInput(what + ": trailing characters in \"" + s + "\"");
  if (!std::isfinite(v)) throw InvalidInput(what + ": must be finite");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

// Optional "^p" suffix after a fixed stem.
std::optional<double> power_suffix(const std::string& spec, const std::string& stem) {
  if (spec == stem) return 1.0;
  if (starts_with(spec, stem + "^")) return parse_real(spec.substr(stem.size() + 1), "rate power");
  return std::nullopt;
}

RateFunction table_rate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open rate table " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x = 0.0, r = 0.0;
    if (!(ls >> x >> r)) throw InvalidInput("rate table " + path + ": bad row \"" + line + "\"");
    if (!(std::isfinite(x) && std::isfinite(r) && r > 0.0)) {
      throw InvalidInput("rate table " + path + ": values must be finite with rho > 0");
    }
    if (!rows.empty() && x <= rows.back().first) throw InvalidInput("rate table " + path + ": x must increase");
    rows.emplace_back(x, r);
  }
  if (rows.size() < 2) throw InvalidInput("rate table " + path + " needs at least two rows");
  if (rows.front().first > 0.0) throw InvalidInput("rate table " + path + " must start at x <= 0");
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].second <= rows[i - 1].second;
  auto fn = [rows](double x) {
    if (x <= rows.front().first) return rows.front().second;
    if (x >= rows.back().first) return rows.back().second * std::max(rows.back().first, 1.0) / std::max(x, 1.0);
    const auto hi = std::upper_bound(rows.begin(), rows.end(), x,
                                     [](double v, const std::pair<double, double>& r) { return v < r.first; });
    const auto lo = hi - 1;
    const double t = (x - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
  };
  return RateFunction("table:" + path, fn, monotone);
}

}  // namespace

RateFunction parse_rate(const std::string& spec) {
  if (auto p = power_suffix(spec, "1/(1+x)")) return RateFunction::reciprocal_linear(*p);
  if (auto p = power_suffix(spec, "1/(1+log(1+x))")) return RateFunction::reciprocal_log(*p);
  if (starts_with(spec, "const:")) return RateFunction::constant(parse_real(spec.substr(6), "constant rate"));
  if (starts_with(spec, "table:")) return table_rate(spec.substr(6));
  throw InvalidInput("unknown rate \"" + spec +
                     "\" (supported: 1/(1+x)[^p], 1/(1+log(1+x))[^p], const:V, table:PATH)");
}

FunctionModel parse_model(const std::string& spec) {
  if (spec == "one") return FunctionModel::constant(1.0);
  if (spec == "exp_iz") return FunctionModel::exp_linear(1.0);
  if (starts_with(spec, "exp:")) return FunctionModel::exp_linear(parse_real(spec.substr(4), "exponential rate"));
  if (starts_with(spec, "blaschke:")) {
    const Complex w = parse_point(spec.substr(9));
    if (!(w.imag() > 0.0)) throw InvalidInput("blaschke model zero must have Im > 0");
    return FunctionModel::rational(1.0, {w}, {std::conj(w)});
  }
  if (spec == "outer") return FunctionModel::rational(1.0, {Complex{0, -2}}, {Complex{0, -1}});
  if (starts_with(spec, "config:")) {
    return blaschke::product_model(io::product_config_from_json(io::read_json_file(spec.substr(7))));
  }
  throw InvalidInput("unknown model \"" + spec + "\" (supported: one, exp_iz, exp:A, blaschke:RE,IM, outer, config:PATH)");
}

ModelSource resolve_model(const std::string& model, const std::string& config_path) {
  if (model.empty() == config_path.empty()) throw InvalidInput("give exactly one of --model or --config");
  if (!model.empty()) return {parse_model(model), std::nullopt, model};
  auto cfg = io::product_config_from_json(io::read_json_file(config_path));
  return {blaschke::product_model(cfg), cfg, "config:" + config_path};
}

factorization::BoundaryModulus parse_boundary(const std::string& spec) {
  if (spec == "one") return factorization::BoundaryModulus::zero();
  if (spec == "outer") {
    // log|f(t)| = log((t^2+4)/(t^2+1)) / 2 <= 1.5 t^-2.
    return factorization::BoundaryModulus::of_model(parse_model("outer"),
                                                    factorization::DecayClass::power(1.5, -2.0, 1.0));
  }
  throw InvalidInput("unknown boundary data \"" + spec + "\" (supported: one, outer)");
}

Complex parse_point(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) return {parse_real(parts[0], "point"), 0.0};
  if (parts.size() == 2) return {parse_real(parts[0], "point real part"), parse_real(parts[1], "point imaginary part")};
  throw InvalidInput("point must be \"re,im\": \"" + s + "\"");
}

std::vector<double> parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw InvalidInput("grid must be \"x0:factor:count\": \"" + s + "\"");
  const double x0 = parse_real(parts[0], "grid x0");
  const double factor = parse_real(parts[1], "grid factor");
  const double count = parse_real(parts[2], "grid count");
  if (std::floor(count) != count || count < 1 || count > 1e6) throw InvalidInput("grid count must be an integer >= 1");
  return certify::geometric_grid(x0, factor, static_cast<int>(count));
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_real(part, "list entry"));
  if (out.empty()) throw InvalidInput("empty list");
  return out;
}

}  // namespace stripbound::cli
