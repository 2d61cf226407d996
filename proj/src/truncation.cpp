#include "discos/truncation.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "discos/errors.hpp"

namespace discos {

namespace {

double parse_number(std::string_view text, const std::string& field) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ValidationError(field + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::string format_shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

struct RawMoments {
  double m1, m2;
};

RawMoments difference_moments(const CharFn1D& cf, double h) {
  const Complex plus = cf(h);
  const Complex minus = cf(-h);
  const Complex zero = cf(0.0);
  return {((plus - minus) / (2.0 * h)).imag(), -((plus - 2.0 * zero + minus) / (h * h)).real()};
}

bool differ(double x, double y) {
  return std::abs(x - y) > 1e-6 * std::max(1.0, std::max(std::abs(x), std::abs(y)));
}

}  // namespace

void RangeRule::validate() const {
  switch (kind) {
    case RangeKind::explicit_bounds:
      if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
        throw ValidationError("range: explicit bounds need a < b");
      }
      break;
    case RangeKind::chebyshev:
      if (!(tol > 0.0 && tol < 1.0)) throw ValidationError("range: chebyshev tol must lie in (0, 1)");
      break;
    case RangeKind::hawkes_25sigma:
      if (!(sigmas > 0.0)) throw ValidationError("range: sigmas must be positive");
      if (!(left_pad_frac >= 0.0)) throw ValidationError("range: left_pad_frac must be >= 0");
      break;
  }
}

std::string RangeRule::label() const {
  switch (kind) {
    case RangeKind::explicit_bounds: return "explicit:" + format_shortest(a) + "," + format_shortest(b);
    case RangeKind::chebyshev: return "chebyshev:" + format_shortest(tol);
    case RangeKind::hawkes_25sigma: return "hawkes";
  }
  return "?";
}

RangeRule parse_range_rule(std::string_view text) {
  RangeRule rule;
  if (text == "hawkes") {
    rule.kind = RangeKind::hawkes_25sigma;
  } else if (text.starts_with("chebyshev:")) {
    rule.kind = RangeKind::chebyshev;
    rule.tol = parse_number(text.substr(10), "range");
  } else if (text.starts_with("explicit:")) {
    const std::string_view body = text.substr(9);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) throw ValidationError("range: explicit form is explicit:a,b");
    rule.kind = RangeKind::explicit_bounds;
    rule.a = parse_number(body.substr(0, comma), "range");
    rule.b = parse_number(body.substr(comma + 1), "range");
  } else {
    throw ValidationError("range: expected explicit:a,b | chebyshev:tol | hawkes, got '" +
                          std::string(text) + "'");
  }
  rule.validate();
  return rule;
}

MomentEstimate charfn_moments(const CharFn1D& cf, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("charfn_moments: h must be positive");
  const RawMoments coarse = difference_moments(cf, h);
  const RawMoments fine = difference_moments(cf, h / 2.0);

  MomentEstimate est;
  RawMoments use = coarse;
  if (differ(coarse.m1, fine.m1) || differ(coarse.m2, fine.m2)) {
    use = {(4.0 * fine.m1 - coarse.m1) / 3.0, (4.0 * fine.m2 - coarse.m2) / 3.0};
    est.refined = true;
  }
  est.mean = use.m1;
  double var = use.m2 - use.m1 * use.m1;
  if (var < -1e-8) {
    throw NumericError("charfn_moments: variance estimate " + std::to_string(var) +
                       " is negative; the difference step h = " + std::to_string(h) + " is unsuitable");
  }
  est.variance = std::max(var, 0.0);
  return est;
}

Interval chebyshev_range(double mean, double variance, double tol) {
  if (!(variance >= 0.0)) throw DomainError("chebyshev_range: variance must be >= 0");
  if (!(tol > 0.0 && tol < 1.0)) throw DomainError("chebyshev_range: tol must lie in (0, 1)");
  const double c = std::sqrt(variance / tol);
  return {mean - c, mean + c};
}

Interval hawkes_range(const HawkesModel& model, const CharFn1D& count_cf, double h, double sigmas,
                      double left_pad_frac) {
  const MomentEstimate m = charfn_moments(count_cf, h);
  const double upper = m.mean + sigmas * std::sqrt(m.variance);
  return {model.N_t - left_pad_frac * upper, upper};
}

}  // namespace discos
