#include "discos/filters.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

namespace discos {

void FilterSpec::validate() const {
  switch (kind) {
    case FilterKind::lanczos:
      if (order_p != 1) throw ConfigError("filter: lanczos has formal order 1");
      break;
    case FilterKind::raised_cosine:
      if (order_p != 2) throw ConfigError("filter: raised cosine has formal order 2");
      break;
    case FilterKind::sharpened_raised_cosine:
      if (order_p != 8) throw ConfigError("filter: sharpened raised cosine has formal order 8");
      break;
    case FilterKind::exponential:
      if (order_p < 2 || order_p % 2 != 0) {
        throw ConfigError("filter: exponential order must be an even integer >= 2, got " +
                          std::to_string(order_p));
      }
      if (alpha_rule == AlphaRule::fixed && !(alpha > 0.0 && std::isfinite(alpha))) {
        throw ConfigError("filter: exponential alpha must be positive and finite");
      }
      break;
    case FilterKind::all_pass:
      break;
  }
}

double FilterSpec::resolved_alpha(int K) const {
  switch (alpha_rule) {
    case AlphaRule::fixed:
      return alpha;
    case AlphaRule::machine_eps:
      return -std::log(std::numeric_limits<double>::epsilon());
    case AlphaRule::k_squared:
      if (K < 1) throw ConfigError("filter: alpha rule k2 needs K >= 1");
      // ln(1) = 0 would make the filter the identity; K = 1 is degenerate anyway.
      return std::log(static_cast<double>(K) * static_cast<double>(K));
  }
  return alpha;
}

std::string FilterSpec::name() const {
  switch (kind) {
    case FilterKind::lanczos: return "lanczos";
    case FilterKind::raised_cosine: return "rcos";
    case FilterKind::sharpened_raised_cosine: return "srcos";
    case FilterKind::exponential: return "exp";
    case FilterKind::all_pass: return "none";
  }
  return "?";
}

std::string FilterSpec::alpha_label() const {
  if (kind != FilterKind::exponential) return "none";
  switch (alpha_rule) {
    case AlphaRule::fixed: {
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, alpha);
      (void)ec;
      return std::string(buf, end);
    }
    case AlphaRule::machine_eps: return "eps";
    case AlphaRule::k_squared: return "k2";
  }
  return "none";
}

FilterKind parse_filter_kind(std::string_view name) {
  if (name == "lanczos") return FilterKind::lanczos;
  if (name == "rcos" || name == "raised_cosine") return FilterKind::raised_cosine;
  if (name == "srcos" || name == "sharpened_raised_cosine") return FilterKind::sharpened_raised_cosine;
  if (name == "exp" || name == "exponential") return FilterKind::exponential;
  if (name == "none" || name == "all_pass") return FilterKind::all_pass;
  throw ConfigError("filter: unknown filter '" + std::string(name) +
                    "' (expected lanczos|rcos|srcos|exp|none)");
}

FilterSpec make_filter(std::string_view name, std::string_view alpha, int exp_order) {
  FilterSpec spec;
  switch (parse_filter_kind(name)) {
    case FilterKind::lanczos: spec = FilterSpec::lanczos(); break;
    case FilterKind::raised_cosine: spec = FilterSpec::raised_cosine(); break;
    case FilterKind::sharpened_raised_cosine: spec = FilterSpec::sharpened_raised_cosine(); break;
    case FilterKind::all_pass: spec = FilterSpec::all_pass(); break;
    case FilterKind::exponential: {
      if (alpha == "eps") {
        spec = FilterSpec::exponential(exp_order, AlphaRule::machine_eps);
      } else if (alpha == "k2") {
        spec = FilterSpec::exponential(exp_order, AlphaRule::k_squared);
      } else {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(alpha.data(), alpha.data() + alpha.size(), value);
        if (ec != std::errc() || ptr != alpha.data() + alpha.size()) {
          throw ConfigError("alpha: expected a number, 'eps' or 'k2', got '" + std::string(alpha) + "'");
        }
        spec = FilterSpec::exponential(exp_order, AlphaRule::fixed, value);
      }
      break;
    }
  }
  spec.validate();
  return spec;
}

}  // namespace discos
