#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "discos/errors.hpp"
#include "discos/filters.hpp"

using namespace discos;

namespace {

std::vector<FilterSpec> all_kinds() {
  return {FilterSpec::lanczos(), FilterSpec::raised_cosine(), FilterSpec::sharpened_raised_cosine(),
          FilterSpec::exponential(2, AlphaRule::machine_eps), FilterSpec::exponential(4, AlphaRule::fixed, 16.0),
          FilterSpec::exponential(2, AlphaRule::k_squared), FilterSpec::all_pass()};
}

}  // namespace

TEST_CASE("catalogue values") {
  CHECK(eval_filter(FilterSpec::raised_cosine(), 0.5, 16) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_filter(FilterSpec::lanczos(), 1.3, 16) == 0.0);
  CHECK(eval_filter(FilterSpec::lanczos(), 0.5, 16) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(eval_filter(FilterSpec::sharpened_raised_cosine(), 1.0, 16) == 0.0);
  for (const auto& f : all_kinds()) CHECK(eval_filter(f, 0.0, 16) == 1.0);
}

TEST_CASE("zero outside [-1, 1] for every kind") {
  for (const auto& f : all_kinds()) {
    for (double eta : {1.0000001, 1.3, 2.0, -1.5, 7.0}) CHECK(eval_filter(f, eta, 32) == 0.0);
  }
}

TEST_CASE("evenness holds to full precision") {
  for (const auto& f : all_kinds()) {
    for (int i = 0; i <= 400; ++i) {
      const double eta = -2.0 + 4.0 * i / 400.0;
      CHECK(eval_filter(f, eta, 64) == eval_filter(f, -eta, 64));
    }
  }
}

TEST_CASE("raised cosine and exponential decay monotonically on [0, 1]") {
  for (const auto& f : {FilterSpec::raised_cosine(), FilterSpec::exponential(2, AlphaRule::machine_eps),
                        FilterSpec::exponential(6, AlphaRule::fixed, 3.0)}) {
    double prev = eval_filter(f, 0.0, 32);
    for (int i = 1; i <= 1000; ++i) {
      const double v = eval_filter(f, i / 1000.0, 32);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("raised cosine is flat at the origin to first order") {
  const auto f = FilterSpec::raised_cosine();
  // (sigma(h) - 1)/h = O(h)
  const double d1 = (eval_filter(f, 1e-3, 1) - 1.0) / 1e-3;
  const double d2 = (eval_filter(f, 1e-4, 1) - 1.0) / 1e-4;
  CHECK(std::abs(d1) < 1e-2);
  CHECK(std::abs(d2) < 1e-3);
  CHECK(std::abs(d1 / d2) == doctest::Approx(10.0).epsilon(1e-3));
}

TEST_CASE("sharpened raised cosine is flat at the origin up to third order") {
  const auto f = FilterSpec::sharpened_raised_cosine();
  const double h = 1e-3;
  auto s = [&](double x) { return eval_filter(f, x, 1); };
  const double first = (s(h) - s(0.0)) / h;
  const double second = (s(2 * h) - 2 * s(h) + s(0.0)) / (h * h);
  const double third = (s(3 * h) - 3 * s(2 * h) + 3 * s(h) - s(0.0)) / (h * h * h);
  CHECK(std::abs(first) < 1e-10);
  CHECK(std::abs(second) < 1e-6);
  CHECK(std::abs(third) < 1e-3);
  // the same stencil sees the raised cosine's curvature
  auto r = [&](double x) { return eval_filter(FilterSpec::raised_cosine(), x, 1); };
  CHECK(std::abs((r(2 * h) - 2 * r(h) + r(0.0)) / (h * h)) > 1.0);
}

TEST_CASE("all_pass is one on [-1, 1]") {
  for (int i = 0; i <= 100; ++i) CHECK(eval_filter(FilterSpec::all_pass(), -1.0 + i / 50.0, 8) == 1.0);
}

TEST_CASE("exponential alpha rules") {
  const auto eps_rule = FilterSpec::exponential(2, AlphaRule::machine_eps);
  CHECK(eps_rule.resolved_alpha(64) == doctest::Approx(-std::log(std::numeric_limits<double>::epsilon())));
  CHECK(eval_filter(eps_rule, 1.0, 64) == doctest::Approx(std::numeric_limits<double>::epsilon()));
  const auto k2 = FilterSpec::exponential(2, AlphaRule::k_squared);
  CHECK(k2.resolved_alpha(64) == doctest::Approx(std::log(64.0 * 64.0)));
  CHECK(eval_filter(k2, 1.0, 64) == doctest::Approx(1.0 / (64.0 * 64.0)));
  CHECK(FilterSpec::exponential(2, AlphaRule::fixed, 16.0).resolved_alpha(8) == 16.0);
}

TEST_CASE("invalid specs raise configuration errors") {
  CHECK_THROWS_AS(FilterSpec::exponential(3, AlphaRule::fixed, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(FilterSpec::exponential(0, AlphaRule::fixed, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(FilterSpec::exponential(2, AlphaRule::fixed, 0.0).validate(), ConfigError);
  CHECK_THROWS_AS(FilterSpec::exponential(2, AlphaRule::fixed, -2.0).validate(), ConfigError);
  CHECK_THROWS_AS(make_filter("exp", "16", 5), ConfigError);
  CHECK_THROWS_AS(make_filter("gauss"), ConfigError);
  CHECK_THROWS_AS(make_filter("exp", "abc"), ConfigError);
}

TEST_CASE("CLI names round trip") {
  for (const char* name : {"lanczos", "rcos", "srcos", "exp", "none"}) CHECK(make_filter(name).name() == name);
  CHECK(make_filter("srcos").order_p == 8);
  CHECK(make_filter("rcos").order_p == 2);
  CHECK(make_filter("lanczos").order_p == 1);
  CHECK(make_filter("exp", "16", 4).order_p == 4);
  CHECK(make_filter("exp", "16").alpha_label() == "16");
  CHECK(make_filter("exp", "k2").alpha_label() == "k2");
  CHECK(make_filter("exp").alpha_label() == "eps");
}
