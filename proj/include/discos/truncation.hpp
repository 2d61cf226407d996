#pragma once

#include <string>
#include <string_view>

#include "discos/charfn_models.hpp"
#include "discos/cos_engine.hpp"

namespace discos {

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

enum class RangeKind { explicit_bounds, chebyshev, hawkes_25sigma };

struct RangeRule {
  RangeKind kind = RangeKind::explicit_bounds;
  double a = 0.0;  ///< explicit bounds
  double b = 0.0;
  double tol = 1e-4;          ///< tail mass tolerance for chebyshev, in (0, 1)
  double sigmas = 25.0;       ///< width multiplier for the hawkes rule
  double left_pad_frac = 0.1; ///< hawkes lower bound is N_t - left_pad_frac * upper

  void validate() const;

  /// CLI form: "explicit:a,b", "chebyshev:tol" or "hawkes".
  std::string label() const;
};

/// Parses "explicit:a,b | chebyshev:tol | hawkes".
RangeRule parse_range_rule(std::string_view text);

struct MomentEstimate {
  double mean = 0.0;
  double variance = 0.0;
  bool refined = false;  ///< Richardson step (h, h/2) was applied
};

/// Mean and variance from central differences of the ch.f.:
///   mean = Im[(phi(h) - phi(-h)) / 2h],
///   E X^2 = -Re[(phi(h) - 2 phi(0) + phi(-h)) / h^2].
/// When the h and h/2 estimates differ by more than 1e-6 (relative) the
/// Richardson combination (4 f(h/2) - f(h))/3 is used. Variances down to
/// -1e-8 are floored at 0; anything more negative raises NumericError.
MomentEstimate charfn_moments(const CharFn1D& cf, double h = 1e-4);

/// [mean - c, mean + c] with c = sqrt(variance / tol), so that Chebyshev's
/// inequality caps the tail mass outside by tol.
Interval chebyshev_range(double mean, double variance, double tol);

/// Hawkes count rule: upper u = mean + sigmas * stddev, lower N_t - left_pad_frac * u.
Interval hawkes_range(const HawkesModel& model, const CharFn1D& count_cf, double h = 1e-4,
                      double sigmas = 25.0, double left_pad_frac = 0.1);

}  // namespace discos
