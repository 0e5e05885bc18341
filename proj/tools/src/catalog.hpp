#pragma once

// String forms accepted on the command line for rates, models, boundary
// data, points and grids.

#include <optional>
#include <string>
#include <vector>

#include "stripbound/blaschke.hpp"
#include "stripbound/core.hpp"
#include "stripbound/factorization.hpp"
#include "stripbound/function_model.hpp"

namespace stripbound::cli {

/// "1/(1+x)", "1/(1+x)^p", "1/(1+log(1+x))", "1/(1+log(1+x))^p",
/// "const:V" or "table:PATH" (two columns x rho, linear interpolation,
/// rho_last * x_last / x past the end).
RateFunction parse_rate(const std::string& spec);

/// "one", "exp_iz", "exp:A", "blaschke:RE,IM", "outer" for (z+2i)/(z+i),
/// or "config:PATH" for a stored product.
FunctionModel parse_model(const std::string& spec);

/// Resolved --model / --config pair. Exactly one must be set.
struct ModelSource {
  FunctionModel model;
  std::optional<blaschke::ProductConfig> config;
  std::string label;
};
ModelSource resolve_model(const std::string& model, const std::string& config_path);

/// Boundary data of the outer part: "one" or "outer".
factorization::BoundaryModulus parse_boundary(const std::string& spec);

/// "re,im" or "re".
Complex parse_point(const std::string& s);

/// "x0:factor:count" geometric grid.
std::vector<double> parse_grid(const std::string& s);

/// Comma-separated reals.
std::vector<double> parse_list(const std::string& s);

}  // namespace stripbound::cli
