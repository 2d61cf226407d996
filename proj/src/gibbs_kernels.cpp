#include "discos/gibbs_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "discos/errors.hpp"
#include "discos/parallel.hpp"
#include "discos/summation.hpp"

namespace discos {

namespace {

using Ext = long double;
constexpr Ext kPiExt = 3.141592653589793238462643383279502884L;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_kernel_args(int K, double x) {
  if (K < 1) throw DomainError("gibbs kernel: K must be >= 1, got " + std::to_string(K));
  if (!(x > 0.0 && x < kTwoPi)) {
    throw DomainError("gibbs kernel: x = " + std::to_string(x) + " not inside (0, 2pi)");
  }
}

}  // namespace

double eval_K0(const FilterSpec& filter, int K, double x) {
  check_kernel_args(K, x);
  filter.validate();
  CompensatedSum<Ext> sum;
  for (int k = K; k >= 1; --k) {
    const Ext sigma = eval_filter<Ext>(filter, Ext(k) / Ext(K), K);
    sum += Ext(2) * sigma * std::cos(Ext(k) * Ext(x));
  }
  sum += Ext(1);
  return static_cast<double>(sum.value());
}

double eval_K1(const FilterSpec& filter, int K, double x) {
  check_kernel_args(K, x);
  filter.validate();
  CompensatedSum<Ext> sum;
  for (int k = K; k >= 1; --k) {
    const Ext sigma = eval_filter<Ext>(filter, Ext(k) / Ext(K), K);
    sum += Ext(2) / Ext(k) * sigma * std::sin(Ext(k) * Ext(x));
  }
  sum += Ext(x) - kPiExt;
  return static_cast<double>(sum.value());
}

double riemann_zeta(int s) {
  if (s < 2) throw DomainError("riemann_zeta: s must be >= 2");
  constexpr int N = 1000;
  const Ext se = s;
  CompensatedSum<Ext> sum;
  for (int k = N - 1; k >= 1; --k) sum += std::pow(Ext(k), -se);
  const Ext n = N;
  // Euler-Maclaurin tail of sum_{k >= N} k^-s
  sum += std::pow(n, 1 - se) / (se - 1);
  sum += std::pow(n, -se) / 2;
  sum += se * std::pow(n, -se - 1) / 12;
  sum += -se * (se + 1) * (se + 2) * std::pow(n, -se - 3) / 720;
  return static_cast<double>(sum.value());
}

KernelBound k1_bound(const FilterSpec& filter, int K, double x) {
  check_kernel_args(K, x);
  filter.validate();
  static const double zeta3 = riemann_zeta(3);
  static const double zeta9 = riemann_zeta(9);

  const double y = kTwoPi - x;
  const double dist = std::abs(x - kPi);
  const double Kd = K;
  KernelBound out;
  switch (filter.kind) {
    case FilterKind::lanczos: {
      const double c = 38.0 / (3.0 * Kd * kPi);
      out.bound = c * dist + c * (1.0 / x + 1.0 / y);
      out.admissible = Kd > std::max(kTwoPi / x, kTwoPi / y);
      break;
    }
    case FilterKind::raised_cosine: {
      const double K2 = Kd * Kd;
      out.bound = zeta3 / (3.0 * kPi * K2) * dist +
                  2.0 * kPi * kPi / (3.0 * K2) * (1.0 / (x * x) + 1.0 / (y * y));
      out.admissible = Kd > std::max(kTwoPi / x, kTwoPi / y);
      break;
    }
    case FilterKind::sharpened_raised_cosine: {
      const double K8 = std::pow(Kd, 8);
      const double pi8 = std::pow(kPi, 8);
      out.bound = 1334025.0 / (kPi * 128.0 * K8) * zeta9 * dist +
                  5336100.0 * pi8 / (8.0 * K8) * (std::pow(x, -8) + std::pow(y, -8));
      out.admissible = Kd > std::max(3.0 * kTwoPi / x, 3.0 * kTwoPi / y);
      break;
    }
    case FilterKind::exponential: {
      if (filter.order_p != 2) {
        throw ConfigError("k1_bound: only the second-order exponential filter has a closed-form bound");
      }
      const double alpha = filter.resolved_alpha(K);
      const double ea = std::exp(-alpha);
      const double pi2 = kPi * kPi;
      double bound = ea / 12.0 * dist * dist +
                     2.0 * ea * (2.0 * std::log(kPi) - std::log(x) - std::log(y));
      bound += 4.0 * alpha * ea / Kd *
               (std::abs(1.0 / x - 1.0 / kPi) + std::abs(1.0 / (x - kTwoPi) + 1.0 / kPi) + dist / 12.0);
      bound += 1.0 / (Kd * Kd) *
               (std::abs(10.0 * alpha / (x * x) - 10.0 * alpha / pi2) +
                std::abs(10.0 * alpha / (y * y) - 10.0 * alpha / pi2) +
                6.5 * alpha / (pi2 * kPi) * dist);
      out.bound = bound;
      out.admissible = true;
      break;
    }
    case FilterKind::all_pass:
      throw ConfigError("k1_bound: filter 'none' has no closed-form K1 bound");
  }
  return out;
}

std::vector<double> interior_grid(int n) {
  if (n < 2) throw DomainError("bounds: grid must have at least 2 points, got " + std::to_string(n));
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) grid[j - 1] = kTwoPi * j / (n + 1);
  return grid;
}

std::vector<BoundSample> bound_sweep(const FilterSpec& filter, const std::vector<int>& Ks, int grid_n) {
  // Reject unsupported filters before any work.
  (void)k1_bound(filter, 1, kPi);
  const std::vector<double> grid = interior_grid(grid_n);
  const std::size_t n = grid.size();
  std::vector<BoundSample> rows(Ks.size() * n);
  parallel_for(n, [&](std::size_t j) {
    for (std::size_t i = 0; i < Ks.size(); ++i) {
      const int K = Ks[i];
      const double x = grid[j];
      const KernelBound b = k1_bound(filter, K, x);
      rows[i * n + j] = {K, x, std::abs(eval_K1(filter, K, x)), b.bound, b.admissible};
    }
  });
  return rows;
}

BoundReport verify_bounds(const FilterSpec& filter, const std::vector<int>& Ks, int grid_n) {
  BoundReport report;
  report.kind = filter.kind;
  report.Ks = Ks;
  report.grid = interior_grid(grid_n);
  report.max_slack = std::numeric_limits<double>::infinity();
  for (const BoundSample& s : bound_sweep(filter, Ks, grid_n)) {
    if (!s.admissible) {
      ++report.skipped_count;
      continue;
    }
    ++report.admissible_count;
    report.max_slack = std::min(report.max_slack, s.bound - s.abs_k1);
    if (s.abs_k1 > s.bound) report.violations.push_back({s.K, s.x, s.abs_k1, s.bound});
  }
  std::sort(report.violations.begin(), report.violations.end(),
            [](const BoundViolation& l, const BoundViolation& r) {
              return l.K != r.K ? l.K < r.K : l.x < r.x;
            });
  return report;
}

std::vector<TracePoint> convergence_trace(const FilterSpec& filter, double x, const std::vector<int>& Ks) {
  std::vector<TracePoint> out(Ks.size());
  parallel_for(Ks.size(), [&](std::size_t i) {
    const int K = Ks[i];
    const KernelBound b = k1_bound(filter, K, x);
    out[i] = {K, std::abs(eval_K1(filter, K, x)), b.bound, b.admissible};
  });
  return out;
}

SlopeFit fit_decay_slope(const std::vector<TracePoint>& trace, double floor, int bins) {
  std::vector<TracePoint> pts = trace;
  std::sort(pts.begin(), pts.end(), [](const TracePoint& l, const TracePoint& r) { return l.K < r.K; });
  // Stop at the first point that reached the floor.
  auto first_floor = std::find_if(pts.begin(), pts.end(),
                                  [floor](const TracePoint& p) { return !(p.abs_k1 > floor); });
  pts.erase(first_floor, pts.end());
  if (pts.size() < 2) throw DomainError("fit_decay_slope: fewer than two points above the floor");

  const double K_hi = pts.back().K;
  const double K_lo = std::max<double>(pts.front().K, K_hi / 10.0);
  std::erase_if(pts, [K_lo](const TracePoint& p) { return p.K < K_lo; });

  const double log_lo = std::log(K_lo);
  const double width = (std::log(K_hi) - log_lo) / bins;
  std::vector<const TracePoint*> envelope(static_cast<std::size_t>(bins), nullptr);
  for (const TracePoint& p : pts) {
    int bin = width > 0.0 ? static_cast<int>((std::log(static_cast<double>(p.K)) - log_lo) / width) : 0;
    bin = std::clamp(bin, 0, bins - 1);
    if (!envelope[bin] || p.abs_k1 > envelope[bin]->abs_k1) envelope[bin] = &p;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const TracePoint* p : envelope) {
    if (!p) continue;
    const double lx = std::log(static_cast<double>(p->K));
    const double ly = std::log(p->abs_k1);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw DomainError("fit_decay_slope: fewer than two envelope points");
  const double dn = static_cast<double>(n);
  SlopeFit fit;
  fit.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  fit.K_lo = pts.front().K;
  fit.K_hi = pts.back().K;
  fit.points = n;
  return fit;
}

}  // namespace discos
