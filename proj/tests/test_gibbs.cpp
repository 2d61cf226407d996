#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "discos/errors.hpp"
#include "discos/gibbs_kernels.hpp"

using namespace discos;

namespace {

constexpr double kPi = std::numbers::pi;

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  // split into many panels first so oscillations are resolved
  const int panels = 64;
  double total = 0;
  for (int i = 0; i < panels; ++i) {
    const double l = a + (b - a) * i / panels, r = a + (b - a) * (i + 1) / panels;
    const double fl = f(l), fr = f(r), fm = f(0.5 * (l + r));
    total += simpson(f, l, r, fl, fm, fr, (r - l) / 6 * (fl + 4 * fm + fr), tol / panels, 40);
  }
  return total;
}

}  // namespace

TEST_CASE("all_pass K0 is the Dirichlet kernel") {
  const auto f = FilterSpec::all_pass();
  for (int K : {1, 5, 32, 200}) {
    for (double x : {0.1, 0.77, 2.0, 3.0, 4.4, 6.1}) {
      const double dirichlet = std::sin((K + 0.5) * x) / std::sin(x / 2);
      CHECK(std::abs((eval_K0(f, K, x)) - (dirichlet)) <= 1e-11 * (K + 1));
    }
  }
}

TEST_CASE("K0 at pi for the raised cosine") {
  const auto f = FilterSpec::raised_cosine();
  double expect = 1.0;
  for (int k = 1; k <= 8; ++k) expect += 2.0 * (k % 2 ? -1.0 : 1.0) * 0.5 * (1.0 + std::cos(kPi * k / 8.0));
  CHECK(std::abs((eval_K0(f, 8, kPi)) - (expect)) <= 1e-15);
}

TEST_CASE("kernel symmetries") {
  for (const auto& f : {FilterSpec::lanczos(), FilterSpec::raised_cosine(), FilterSpec::sharpened_raised_cosine(),
                        FilterSpec::exponential(2, AlphaRule::fixed, 16.0)}) {
    for (int K : {3, 16, 128}) {
      CHECK(std::abs(eval_K1(f, K, kPi)) <= 1e-15);
      for (double x : {0.01, 0.5, 1.3, 2.9}) {
        CHECK(std::abs((eval_K0(f, K, 2 * kPi - x)) - (eval_K0(f, K, x))) <= 1e-12);
        CHECK(std::abs((eval_K1(f, K, 2 * kPi - x)) - (-eval_K1(f, K, x))) <= 1e-14);
      }
    }
  }
}

TEST_CASE("K1 is the integral of K0 from pi") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ux(0.05, 2 * kPi - 0.05);
  std::uniform_int_distribution<int> uk(2, 80), ukind(0, 4);
  const FilterSpec kinds[] = {FilterSpec::lanczos(), FilterSpec::raised_cosine(), FilterSpec::sharpened_raised_cosine(),
                              FilterSpec::exponential(2, AlphaRule::k_squared), FilterSpec::all_pass()};
  for (int trial = 0; trial < 20; ++trial) {
    const FilterSpec f = kinds[ukind(rng)];
    const int K = uk(rng);
    const double x = ux(rng);
    const double integral = adaptive_simpson([&](double t) { return eval_K0(f, K, t); }, kPi, x, 1e-11);
    CHECK(std::abs((eval_K1(f, K, x)) - (integral)) <= 1e-8);
  }
}

TEST_CASE("zeta values") {
  CHECK(riemann_zeta(2) == doctest::Approx(kPi * kPi / 6).epsilon(1e-15));
  CHECK(riemann_zeta(3) == doctest::Approx(1.2020569031595942).epsilon(1e-15));
  CHECK(riemann_zeta(9) == doctest::Approx(1.0020083928260822).epsilon(1e-15));
}

TEST_CASE("closed-form bounds") {
  const KernelBound l = k1_bound(FilterSpec::lanczos(), 100, 0.5);
  const double expect = 38.0 / (300.0 * kPi) * (std::abs(0.5 - kPi) + 1.0 / 0.5 + 1.0 / (2 * kPi - 0.5));
  CHECK(l.bound == doctest::Approx(expect).epsilon(1e-14));
  CHECK(l.bound == doctest::Approx(0.1942).epsilon(1e-3));
  CHECK(l.admissible);
  CHECK_FALSE(k1_bound(FilterSpec::lanczos(), 5, 0.5).admissible);

  for (int K : {8, 64, 1000}) {
    CHECK(k1_bound(FilterSpec::raised_cosine(), K, kPi).bound == doctest::Approx(4.0 / (3.0 * K * K)).epsilon(1e-14));
  }
  // sharpened threshold: K > 6 pi / x
  CHECK_FALSE(k1_bound(FilterSpec::sharpened_raised_cosine(), 37, 0.5).admissible);
  CHECK(k1_bound(FilterSpec::sharpened_raised_cosine(), 38, 0.5).admissible);
  CHECK(k1_bound(FilterSpec::exponential(2, AlphaRule::fixed, 16.0), 1, 0.01).admissible);

  CHECK_THROWS_AS(k1_bound(FilterSpec::all_pass(), 16, 1.0), ConfigError);
  CHECK_THROWS_AS(k1_bound(FilterSpec::exponential(4, AlphaRule::fixed, 16.0), 16, 1.0), ConfigError);
}

TEST_CASE("interior grid") {
  const auto g = interior_grid(1000);
  REQUIRE(g.size() == 1000);
  CHECK(g.front() > 0.0);
  CHECK(g.back() < 2 * kPi);
  CHECK(g[1] - g[0] == doctest::Approx(2 * kPi / 1001));
}

TEST_CASE("bound sweeps hold for raised cosine and lanczos") {
  const std::vector<int> Ks{16, 32, 64, 128, 256};
  for (const auto& f : {FilterSpec::raised_cosine(), FilterSpec::lanczos()}) {
    const BoundReport r = verify_bounds(f, Ks, 1000);
    CHECK(r.holds());
    CHECK(r.violations.empty());
    CHECK(r.admissible_count + r.skipped_count == 5000);
    CHECK(r.skipped_count > 0);
    CHECK(r.max_slack > 0.0);
  }
  CHECK_THROWS_AS(verify_bounds(FilterSpec::all_pass(), Ks, 100), ConfigError);
}

TEST_CASE("sweep rows come out K-major") {
  const auto rows = bound_sweep(FilterSpec::raised_cosine(), {32, 16}, 10);
  REQUIRE(rows.size() == 20);
  CHECK(rows[0].K == 32);
  CHECK(rows[10].K == 16);
  CHECK(rows[3].x == doctest::Approx(2 * kPi * 4 / 11));
}

TEST_CASE("decay of |K1(0.5)| is at least as fast as the filter order") {
  std::vector<int> Ks;
  for (int K = 8; K <= 1024; ++K) Ks.push_back(K);
  struct Case {
    FilterSpec f;
    double order;
  };
  for (const auto& c : {Case{FilterSpec::lanczos(), 1}, Case{FilterSpec::raised_cosine(), 2},
                        Case{FilterSpec::sharpened_raised_cosine(), 8},
                        Case{FilterSpec::exponential(2, AlphaRule::k_squared), 2}}) {
    const SlopeFit fit = fit_decay_slope(convergence_trace(c.f, 0.5, Ks));
    CAPTURE(c.f.name());
    CAPTURE(fit.slope);
    CHECK(fit.slope <= -(c.order - 0.2));
    CHECK(fit.points >= 4);
  }
}

TEST_CASE("slope fit recovers a clean power law") {
  std::vector<TracePoint> t;
  for (int K = 10; K <= 1000; K += 10) t.push_back({K, 3.0 * std::pow(K, -2.5), 1.0, true});
  CHECK(fit_decay_slope(t).slope == doctest::Approx(-2.5).epsilon(1e-9));
  std::vector<TracePoint> floored = t;
  for (auto& p : floored) if (p.K > 500) p.abs_k1 = 1e-14;
  const SlopeFit f = fit_decay_slope(floored);
  CHECK(f.K_hi <= 500);
  CHECK(f.slope == doctest::Approx(-2.5).epsilon(1e-9));
}
