#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace stripbound {

/// Knobs shared by every integral in the library.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  /// Panels are also accepted once their error is below rel_tol * |panel|;
  /// zero disables the relative criterion.
  double rel_tol = 0.0;
  int max_subdivisions = 20000;
  /// Truncation radius for integrals over the real line; tails beyond it are
  /// bounded analytically.
  double tail_radius = 1e6;
  /// Partial integrals above this value with a growing trend are reported as
  /// divergent.
  double divergence_threshold = 1e6;
  /// log|f| values of -inf (exact zeros) are clipped to log(log_floor).
  double log_floor = 1e-300;

  void validate() const;
};

/// Value with a reported error bound and diagnostic flags.
struct Estimate {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
  void add_flag(const std::string& f);
  void merge_flags(const Estimate& other);
};

inline constexpr const char* kFlagNotConverged = "quadrature_not_converged";
inline constexpr const char* kFlagClipped = "clipped_at_floor";

/// Adaptive Gauss-Kronrod (7, 15) bisection over [a, b]. The absolute
/// tolerance budget is split across panels in proportion to their width and
/// panel sums are combined as a binary tree, so results are reproducible.
/// `breakpoints` inside (a, b) start the bisection on a finer partition.
Estimate integrate(const std::function<double(double)>& f, double a, double b,
                   const QuadratureSpec& spec, std::span<const double> breakpoints = {});

}  // namespace stripbound
