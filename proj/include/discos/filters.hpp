#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <string_view>

#include "discos/errors.hpp"

namespace discos {

enum class FilterKind { lanczos, raised_cosine, sharpened_raised_cosine, exponential, all_pass };

/// How the exponential filter's exponent scale is chosen.
enum class AlphaRule {
  fixed,        ///< alpha as given
  machine_eps,  ///< alpha = -ln(machine epsilon), so e^-alpha is at roundoff level
  k_squared,    ///< alpha = ln(K^2), restores second-order decay for p = 2
};

/// A spectral filter sigma(eta): even, sigma(0) = 1, zero outside [-1, 1].
///
/// `all_pass` (sigma = 1 on [-1, 1]) is not a spectral filter in the strict
/// sense. It reproduces the unfiltered partial sum and is only meant as a
/// control in convergence experiments.
struct FilterSpec {
  FilterKind kind = FilterKind::raised_cosine;
  int order_p = 2;
  double alpha = 0.0;
  AlphaRule alpha_rule = AlphaRule::fixed;

  static FilterSpec lanczos() { return {FilterKind::lanczos, 1, 0.0, AlphaRule::fixed}; }
  static FilterSpec raised_cosine() { return {FilterKind::raised_cosine, 2, 0.0, AlphaRule::fixed}; }
  static FilterSpec sharpened_raised_cosine() {
    return {FilterKind::sharpened_raised_cosine, 8, 0.0, AlphaRule::fixed};
  }
  static FilterSpec exponential(int order, AlphaRule rule, double alpha = 0.0) {
    return {FilterKind::exponential, order, alpha, rule};
  }
  static FilterSpec all_pass() { return {FilterKind::all_pass, 0, 0.0, AlphaRule::fixed}; }

  /// Throws ConfigError for odd/small exponential orders, non-positive fixed
  /// alpha, or a formal order that does not match the kind.
  void validate() const;

  /// Exponent scale in effect for a given K (only meaningful for exponential).
  double resolved_alpha(int K) const;

  /// Short CLI name: lanczos, rcos, srcos, exp, none.
  std::string name() const;

  /// Human-readable alpha description for output headers: "16", "eps", "k2" or "none".
  std::string alpha_label() const;
};

/// Parses the CLI filter names (lanczos|rcos|srcos|exp|none).
FilterKind parse_filter_kind(std::string_view name);

/// Builds a validated FilterSpec from CLI-style arguments. `alpha` is a number,
/// "eps" or "k2"; it is ignored for non-exponential kinds.
FilterSpec make_filter(std::string_view name, std::string_view alpha = "eps", int exp_order = 2);

namespace detail {

template <std::floating_point T>
T raised_cosine(T eta) {
  constexpr T pi = T(3.141592653589793238462643383279502884L);
  return (T(1) + std::cos(pi * eta)) / T(2);
}

}  // namespace detail

/// sigma(eta) for the given filter. K is only consulted by AlphaRule::k_squared.
/// Templated so the Gibbs-kernel sums can run in extended precision.
template <std::floating_point T>
T eval_filter(const FilterSpec& spec, T eta, int K) {
  constexpr T pi = T(3.141592653589793238462643383279502884L);
  const T x = std::abs(eta);
  if (x > T(1)) return T(0);
  switch (spec.kind) {
    case FilterKind::lanczos: {
      if (x == T(0)) return T(1);
      return std::sin(pi * x) / (pi * x);
    }
    case FilterKind::raised_cosine:
      return detail::raised_cosine(x);
    case FilterKind::sharpened_raised_cosine: {
      const T r = detail::raised_cosine(x);
      const T r2 = r * r;
      return r2 * r2 * (T(35) - T(84) * r + T(70) * r2 - T(20) * r2 * r);
    }
    case FilterKind::exponential: {
      const T alpha = static_cast<T>(spec.resolved_alpha(K));
      return std::exp(-alpha * std::pow(x, static_cast<T>(spec.order_p)));
    }
    case FilterKind::all_pass:
      return T(1);
  }
  return T(0);
}

inline double eval_filter(const FilterSpec& spec, double eta, int K) {
  return eval_filter<double>(spec, eta, K);
}

}  // namespace discos
