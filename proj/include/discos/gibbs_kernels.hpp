#pragma once

#include <cstddef>
#include <vector>

#include "discos/filters.hpp"

namespace discos {

/// Filtered Dirichlet kernel K_0(x) = 1 + 2 sum_{k=1}^K sigma(k/K) cos(kx).
///
/// Kernel sums are accumulated in extended precision: for the sharpened
/// raised cosine the closed-form bound reaches 1e-16 at K = 512, below what a
/// double-precision evaluation of the sum can resolve.
double eval_K0(const FilterSpec& filter, int K, double x);

/// Zero-mean antiderivative K_1(x) = x - pi + sum_{k=1}^K (2/k) sigma(k/K) sin(kx).
double eval_K1(const FilterSpec& filter, int K, double x);

struct KernelBound {
  double bound = 0.0;
  bool admissible = false;  ///< K above the threshold the bound is proven for
};

/// Closed-form upper bound on |K_1(x)| for x in (0, 2 pi).
///
/// Thresholds: lanczos and raised cosine need K > max(2pi/x, 2pi/(2pi-x)),
/// the sharpened raised cosine K > max(6pi/x, 6pi/(2pi-x)); the
/// second-order exponential bound carries no threshold. all_pass and
/// exponential orders other than 2 have no closed-form bound (ConfigError).
KernelBound k1_bound(const FilterSpec& filter, int K, double x);

/// Riemann zeta for s >= 2 via direct summation plus Euler-Maclaurin tail.
double riemann_zeta(int s);

struct BoundViolation {
  int K;
  double x;
  double abs_k1;
  double bound;
};

struct BoundSample {
  int K;
  double x;
  double abs_k1;
  double bound;
  bool admissible;
};

struct BoundReport {
  FilterKind kind = FilterKind::raised_cosine;
  std::vector<int> Ks;
  std::vector<double> grid;
  std::vector<BoundViolation> violations;  ///< sorted by (K, x)
  std::size_t admissible_count = 0;
  std::size_t skipped_count = 0;           ///< inadmissible (K, x) pairs
  double max_slack = 0.0;                  ///< min over admissible points of bound - |K_1|

  bool holds() const { return violations.empty(); }
};

/// n evenly spaced interior points of (0, 2 pi): x_j = 2 pi j/(n+1).
std::vector<double> interior_grid(int n);

/// |K_1| and its bound at every (K, x) of the sweep, K-major order.
std::vector<BoundSample> bound_sweep(const FilterSpec& filter, const std::vector<int>& Ks,
                                     int grid_n);

/// Checks |K_1| <= bound at every admissible (K, x) of the sweep.
BoundReport verify_bounds(const FilterSpec& filter, const std::vector<int>& Ks, int grid_n);

struct TracePoint {
  int K;
  double abs_k1;
  double bound;
  bool admissible;
};

/// |K_1(x)| and its bound along a list of K values.
std::vector<TracePoint> convergence_trace(const FilterSpec& filter, double x,
                                          const std::vector<int>& Ks);

struct SlopeFit {
  double slope = 0.0;
  int K_lo = 0;
  int K_hi = 0;
  std::size_t points = 0;
};

/// Empirical decay order of |K_1| along a trace.
///
/// Points at or below `floor` are dropped and the fit is restricted to the
/// last decade [K_hi/10, K_hi] of what remains. |K_1(x)| oscillates in K,
/// so the fit runs on the upper envelope: the decade is split into
/// `bins` logarithmic bins and the largest |K_1| of each bin enters a least
/// squares line in (log K, log |K_1|).
SlopeFit fit_decay_slope(const std::vector<TracePoint>& trace, double floor = 1e-13, int bins = 16);

}  // namespace discos
