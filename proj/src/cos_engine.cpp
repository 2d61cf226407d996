#include "discos/cos_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "discos/errors.hpp"
#include "discos/parallel.hpp"
#include "discos/summation.hpp"

namespace discos {

namespace {

void check_interval(double a, double b, const char* what) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw DomainError(std::string(what) + ": need finite bounds with b > a, got [" +
                      std::to_string(a) + ", " + std::to_string(b) + "]");
  }
}

void check_terms(int K, const char* what) {
  if (K < 1) throw DomainError(std::string(what) + ": K must be >= 1, got " + std::to_string(K));
}

// Re{ phi * exp(-i phase) }
double shifted_real_part(Complex phi, double phase) {
  return phi.real() * std::cos(phase) + phi.imag() * std::sin(phase);
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(Complex phi, const std::string& where) {
  if (!finite(phi)) {
    throw NumericError("ch.f. sample is not finite at " + where);
  }
}

}  // namespace

CosExpansion sample_coefficients(const CharFn1D& cf, double a, double b, int K) {
  check_interval(a, b, "sample_coefficients");
  check_terms(K, "sample_coefficients");

  CosExpansion out{a, b, K, std::vector<double>(static_cast<std::size_t>(K) + 1)};
  const double length = b - a;
  const double scale = 2.0 / length;
  std::vector<Complex> samples(out.coeffs.size());
  parallel_for(samples.size(), [&](std::size_t k) {
    samples[k] = cf(static_cast<double>(k) * std::numbers::pi / length);
  });
  // Reported in ascending k so the error does not depend on thread timing.
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double w = static_cast<double>(k) * std::numbers::pi / length;
    require_finite(samples[k], "k=" + std::to_string(k) + " (w=" + std::to_string(w) + ")");
    out.coeffs[k] = scale * shifted_real_part(samples[k], w * a);
  }
  return out;
}

FilteredCdf::FilteredCdf(const CosExpansion& exp, const FilterSpec& filter)
    : a_(exp.a), b_(exp.b), length_(exp.b - exp.a) {
  check_interval(exp.a, exp.b, "filtered_cdf");
  check_terms(exp.K, "filtered_cdf");
  if (exp.coeffs.size() != static_cast<std::size_t>(exp.K) + 1) {
    throw DomainError("filtered_cdf: expansion holds " + std::to_string(exp.coeffs.size()) +
                      " coefficients, expected K+1 = " + std::to_string(exp.K + 1));
  }
  filter.validate();
  slope_ = exp.coeffs[0] / 2.0;
  weights_.resize(static_cast<std::size_t>(exp.K));
  for (int k = 1; k <= exp.K; ++k) {
    const double sigma = eval_filter(filter, static_cast<double>(k) / exp.K, exp.K);
    weights_[k - 1] = exp.coeffs[k] * sigma * length_ / (k * std::numbers::pi);
  }
}

double FilteredCdf::operator()(double x) const {
  if (!(x >= a_ && x <= b_)) {
    throw DomainError("filtered_cdf: x = " + std::to_string(x) + " outside [" + std::to_string(a_) +
                      ", " + std::to_string(b_) + "]");
  }
  const double t = (x - a_) / length_;
  CompensatedSum<double> sum;
  for (std::size_t k = weights_.size(); k >= 1; --k) {
    sum += weights_[k - 1] * sinpi_product(static_cast<double>(k), t);
  }
  sum += slope_ * (x - a_);
  return sum.value();
}

std::vector<double> FilteredCdf::clamped(std::span<const double> sorted_x) const {
  std::vector<double> out;
  out.reserve(sorted_x.size());
  double running = 0.0;
  for (double x : sorted_x) {
    running = std::max(running, std::clamp((*this)(x), 0.0, 1.0));
    out.push_back(running);
  }
  return out;
}

double filtered_cdf(const CosExpansion& exp, const FilterSpec& filter, double x) {
  return FilteredCdf(exp, filter)(x);
}

std::vector<double> recover_pmf(const CosExpansion& exp, const FilterSpec& filter,
                                std::span<const double> support, double dx) {
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw PreconditionError("recover_pmf: dx must be positive, got " + std::to_string(dx));
  }
  if (support.empty()) return {};
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double x = support[i];
    if (!(x > exp.a && x < exp.b)) {
      throw PreconditionError("recover_pmf: support point X[" + std::to_string(i) + "] = " +
                              std::to_string(x) + " not inside (a, b)");
    }
    if (i > 0) {
      const double gap = x - support[i - 1];
      if (!(gap > 0.0)) {
        throw PreconditionError("recover_pmf: support not strictly increasing at pair (X[" +
                                std::to_string(i - 1) + "], X[" + std::to_string(i) + "])");
      }
      if (!(dx < gap / 2.0)) {
        throw PreconditionError("recover_pmf: dx = " + std::to_string(dx) +
                                " not below half the gap of pair (X[" + std::to_string(i - 1) +
                                "], X[" + std::to_string(i) + "]) = (" +
                                std::to_string(support[i - 1]) + ", " + std::to_string(x) + ")");
      }
    }
  }
  if (support.front() - dx < exp.a) {
    throw PreconditionError("recover_pmf: dx too large for pair (a, X[0]) = (" +
                            std::to_string(exp.a) + ", " + std::to_string(support.front()) + ")");
  }
  if (support.back() + dx > exp.b) {
    throw PreconditionError("recover_pmf: dx too large for pair (X[last], b) = (" +
                            std::to_string(support.back()) + ", " + std::to_string(exp.b) + ")");
  }

  const FilteredCdf cdf(exp, filter);
  std::vector<double> masses(support.size());
  parallel_for(support.size(), [&](std::size_t i) {
    masses[i] = cdf(support[i] + dx) - cdf(support[i] - dx);
  });
  return masses;
}

std::vector<double> cosine_power_integrals(double a, double b, int K, int q) {
  check_interval(a, b, "cosine_power_integrals");
  if (q < 0) throw DomainError("cos_moment: q must be >= 0, got " + std::to_string(q));
  const double length = b - a;
  std::vector<double> out(static_cast<std::size_t>(std::max(K, 0)));
  for (int k = 1; k <= K; ++k) {
    const double w = k * std::numbers::pi / length;
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;  // cos(k pi)
    // I_j = int x^j cos, J_j = int x^j sin over [a, b], phase zero at x = a.
    double I = 0.0;
    double J = (1.0 - sgn) / w;
    double a_pow = 1.0;
    double b_pow = 1.0;
    for (int j = 1; j <= q; ++j) {
      a_pow *= a;
      b_pow *= b;
      const double I_next = -(j / w) * J;
      const double J_next = -(b_pow * sgn - a_pow) / w + (j / w) * I;
      I = I_next;
      J = J_next;
    }
    out[k - 1] = I;
  }
  return out;
}

double cos_moment(const CosExpansion& exp, const FilterSpec& filter, int q) {
  check_interval(exp.a, exp.b, "cos_moment");
  check_terms(exp.K, "cos_moment");
  filter.validate();
  const std::vector<double> C = cosine_power_integrals(exp.a, exp.b, exp.K, q);
  CompensatedSum<double> sum;
  for (int k = exp.K; k >= 1; --k) {
    const double sigma = eval_filter(filter, static_cast<double>(k) / exp.K, exp.K);
    sum += sigma * exp.coeffs[k] * C[k - 1];
  }
  const double base = exp.coeffs[0] / (2.0 * (q + 1)) *
                      (std::pow(exp.b, q + 1) - std::pow(exp.a, q + 1));
  sum += base;
  return sum.value();
}

CosExpansion2D sample_coefficients_2d(const CharFn2D& cf, const Rectangle& box, int K1, int K2) {
  check_interval(box.a1, box.b1, "sample_coefficients_2d (dimension 1)");
  check_interval(box.a2, box.b2, "sample_coefficients_2d (dimension 2)");
  check_terms(K1, "sample_coefficients_2d");
  check_terms(K2, "sample_coefficients_2d");

  CosExpansion2D out{box.a1, box.b1, box.a2, box.b2, K1, K2,
                     std::vector<double>(static_cast<std::size_t>(K1 + 1) * (K2 + 1))};
  const double L1 = box.b1 - box.a1;
  const double L2 = box.b2 - box.a2;
  const double scale = 4.0 / (L1 * L2);
  std::vector<int> first_bad(static_cast<std::size_t>(K1) + 1, -1);
  parallel_for(static_cast<std::size_t>(K1) + 1, [&](std::size_t k1) {
    const double w1 = static_cast<double>(k1) * std::numbers::pi / L1;
    for (int k2 = 0; k2 <= K2; ++k2) {
      const double w2 = k2 * std::numbers::pi / L2;
      const Complex plus = cf(w1, w2);
      const Complex minus = cf(w1, -w2);
      if (!finite(plus) || !finite(minus)) {
        first_bad[k1] = k2;
        return;
      }
      const double a_plus = scale * shifted_real_part(plus, w1 * box.a1 + w2 * box.a2);
      const double a_minus = scale * shifted_real_part(minus, w1 * box.a1 - w2 * box.a2);
      out.coeffs[k1 * (K2 + 1) + k2] = 0.5 * (a_plus + a_minus);
    }
  });
  for (std::size_t k1 = 0; k1 < first_bad.size(); ++k1) {
    if (first_bad[k1] >= 0) {
      throw NumericError("ch.f. sample is not finite at (k1, k2) = (" + std::to_string(k1) + ", " +
                         std::to_string(first_bad[k1]) + ")");
    }
  }
  return out;
}

double filtered_cdf_2d(const CosExpansion2D& exp, const FilterSpec& filter, double x1, double x2) {
  if (!(x1 >= exp.a1 && x1 <= exp.b1 && x2 >= exp.a2 && x2 <= exp.b2)) {
    throw DomainError("filtered_cdf_2d: (" + std::to_string(x1) + ", " + std::to_string(x2) +
                      ") outside the truncation rectangle");
  }
  filter.validate();
  const double L1 = exp.b1 - exp.a1;
  const double L2 = exp.b2 - exp.a2;
  const double t1 = (x1 - exp.a1) / L1;
  const double t2 = (x2 - exp.a2) / L2;

  // S_j(k) = sigma(k/K_j) L_j/(k pi) sin(k pi t_j); index 0 holds the k = 0 term x_j - a_j.
  auto side = [&](int K, double L, double t, double offset) {
    std::vector<double> s(static_cast<std::size_t>(K) + 1);
    s[0] = offset;
    for (int k = 1; k <= K; ++k) {
      s[k] = eval_filter(filter, static_cast<double>(k) / K, K) * L / (k * std::numbers::pi) *
             sinpi_product(static_cast<double>(k), t);
    }
    return s;
  };
  const std::vector<double> s1 = side(exp.K1, L1, t1, x1 - exp.a1);
  const std::vector<double> s2 = side(exp.K2, L2, t2, x2 - exp.a2);

  CompensatedSum<double> sum;
  for (int k1 = exp.K1; k1 >= 1; --k1) {
    for (int k2 = exp.K2; k2 >= 1; --k2) sum += exp.at(k1, k2) * s1[k1] * s2[k2];
  }
  for (int k2 = exp.K2; k2 >= 1; --k2) sum += 0.5 * exp.at(0, k2) * s1[0] * s2[k2];
  for (int k1 = exp.K1; k1 >= 1; --k1) sum += 0.5 * exp.at(k1, 0) * s1[k1] * s2[0];
  sum += 0.25 * exp.at(0, 0) * s1[0] * s2[0];
  return sum.value();
}

}  // namespace discos
