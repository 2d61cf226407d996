#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "discos/charfn_models.hpp"
#include "discos/errors.hpp"
#include "discos/model_io.hpp"
#include "discos/oracles.hpp"
#include "discos/truncation.hpp"
#include "test_support.hpp"

using namespace discos;
using discos::testing::data_path;
using discos::testing::random_dist;
using discos::testing::two_point;

namespace {

constexpr double kPi = std::numbers::pi;

HawkesModel reference_hawkes() { return std::get<HawkesModel>(load_model(data_path("hawkes_reference.json"))); }

double variance_of(const DiscreteDist& d) {
  const double m = exact_moment(d, 1);
  return exact_moment(d, 2) - m * m;
}

}  // namespace

TEST_CASE("moments of a single atom") {
  const MomentEstimate e = charfn_moments(charfn_discrete(DiscreteDist({2.5}, {1.0})));
  CHECK(e.mean == doctest::Approx(2.5).epsilon(1e-7));
  CHECK(std::abs((e.variance) - (0.0)) <= 1e-6);
  CHECK(e.variance >= 0.0);
}

TEST_CASE("moments of the two-point law") {
  const MomentEstimate e = charfn_moments(charfn_discrete(two_point()));
  CHECK(e.mean == doctest::Approx(0.4 * kPi).epsilon(1e-8));
  CHECK(e.variance == doctest::Approx(0.24 * (kPi / 4) * (kPi / 4)).epsilon(1e-6));
}

TEST_CASE("hawkes moments match the moment ODE") {
  const HawkesModel m = reference_hawkes();
  const MomentEstimate e = charfn_moments(hawkes_count_charfn(m, kDefaultHawkesSteps));
  CHECK(std::abs(e.mean - hawkes_mean_ode(m, kDefaultHawkesSteps)) < 1e-6);
  CHECK(e.variance > 0.0);
}

TEST_CASE("negative variance estimates are rejected") {
  // not a characteristic function: second difference of 1 + w^2 gives E X^2 = -2
  auto bad = [](double w) { return Complex(1.0 + w * w, 0.0); };
  CHECK_THROWS_AS(charfn_moments(bad), NumericError);
  CHECK_THROWS_AS(charfn_moments(charfn_discrete(two_point()), 0.0), DomainError);
}

TEST_CASE("Richardson refinement kicks in when the step is coarse") {
  const MomentEstimate coarse = charfn_moments(charfn_discrete(two_point()), 0.1);
  CHECK(coarse.refined);
  CHECK(coarse.mean == doctest::Approx(0.4 * kPi).epsilon(1e-5));
}

TEST_CASE("chebyshev range") {
  const Interval deg = chebyshev_range(1.5, 0.0, 0.1);
  CHECK(deg.a == 1.5);
  CHECK(deg.b == 1.5);
  const Interval unit = chebyshev_range(0.0, 1.0, 0.01);
  CHECK(unit.a == doctest::Approx(-10.0));
  CHECK(unit.b == doctest::Approx(10.0));
  const MomentEstimate e = charfn_moments(charfn_discrete(two_point()));
  const Interval two = chebyshev_range(e.mean, e.variance, 1e-4);
  CHECK(two.a < kPi / 4);
  CHECK(two.b > kPi / 2);
  CHECK_THROWS_AS(chebyshev_range(0.0, -1.0, 0.1), DomainError);
  CHECK_THROWS_AS(chebyshev_range(0.0, 1.0, 1.0), DomainError);
}

TEST_CASE("chebyshev guarantee and monotonicity on random laws") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const DiscreteDist d = random_dist(rng, 2 + trial % 18, -3.0, 5.0);
    const double mean = exact_moment(d, 1), var = variance_of(d);
    Interval prev{0, 0};
    for (double tol : {0.5, 0.2, 0.05, 0.01, 1e-4}) {
      const Interval iv = chebyshev_range(mean, var, tol);
      const double inside = exact_cdf(d, iv.b) - exact_cdf(d, std::nextafter(iv.a, -1e300));
      CHECK(1.0 - inside <= tol + 1e-15);
      if (prev.b > prev.a) {
        CHECK(iv.a <= prev.a);
        CHECK(iv.b >= prev.b);
      }
      prev = iv;
    }
  }
}

TEST_CASE("hawkes range") {
  const HawkesModel m = reference_hawkes();
  const CharFn1D cf = hawkes_count_charfn(m, kDefaultHawkesSteps);
  const MomentEstimate e = charfn_moments(cf);
  const Interval iv = hawkes_range(m, cf);
  CHECK(iv.b == doctest::Approx(e.mean + 25.0 * std::sqrt(e.variance)));
  CHECK(iv.a == doctest::Approx(m.N_t - 0.1 * iv.b));
  const Interval deg = hawkes_range(m, cf, 1e-4, 0.0);
  CHECK(deg.b == doctest::Approx(e.mean));
  CHECK(deg.a == doctest::Approx(m.N_t - 0.1 * e.mean));
}

TEST_CASE("hawkes range holds the simulated mass") {
  const HawkesModel m = reference_hawkes();
  const CharFn1D cf = hawkes_count_charfn(m, kDefaultHawkesSteps);
  const Interval iv = hawkes_range(m, cf);
  const std::vector<double> grid{std::nextafter(iv.a, -1e300), iv.b};
  const MonteCarloCdf mc = monte_carlo_cdf(hawkes_count_sampler(m), 1'000'000, grid, 2024);
  CHECK(mc.cdf[1] - mc.cdf[0] >= 1.0 - 1e-6);
}

TEST_CASE("range rule parsing") {
  const RangeRule e = parse_range_rule("explicit:-1.5,4");
  CHECK(e.kind == RangeKind::explicit_bounds);
  CHECK(e.a == -1.5);
  CHECK(e.b == 4.0);
  CHECK(e.label() == "explicit:-1.5,4");
  const RangeRule c = parse_range_rule("chebyshev:0.001");
  CHECK(c.kind == RangeKind::chebyshev);
  CHECK(c.tol == 0.001);
  CHECK(parse_range_rule(c.label()).tol == 0.001);
  const RangeRule h = parse_range_rule("hawkes");
  CHECK(h.kind == RangeKind::hawkes_25sigma);
  CHECK(h.sigmas == 25.0);
  CHECK(h.left_pad_frac == 0.1);
  CHECK_THROWS_AS(parse_range_rule("chebyshev:1.5"), ValidationError);
  CHECK_THROWS_AS(parse_range_rule("chebyshev:0"), ValidationError);
  CHECK_THROWS_AS(parse_range_rule("explicit:3,1"), ValidationError);
  CHECK_THROWS_AS(parse_range_rule("explicit:3"), ValidationError);
  CHECK_THROWS_AS(parse_range_rule("wide"), ValidationError);
  RangeRule bad;
  bad.kind = RangeKind::hawkes_25sigma;
  bad.sigmas = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}
