#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "discos/filters.hpp"

namespace discos {

using Complex = std::complex<double>;

/// Characteristic function phi(w) = E[exp(i w X)] of a real random variable.
using CharFn1D = std::function<Complex(double)>;

/// Bivariate characteristic function phi(w1, w2) = E[exp(i (w1 X1 + w2 X2))].
using CharFn2D = std::function<Complex(double, double)>;

/// Cosine-series coefficients A_0..A_K of a law on the interval [a, b].
struct CosExpansion {
  double a = 0.0;
  double b = 0.0;
  int K = 0;
  std::vector<double> coeffs;

  double length() const { return b - a; }
};

/// Bivariate coefficients A_{k1,k2}, stored row-major with k2 fastest.
struct CosExpansion2D {
  double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
  int K1 = 0, K2 = 0;
  std::vector<double> coeffs;

  double at(int k1, int k2) const { return coeffs[static_cast<std::size_t>(k1) * (K2 + 1) + k2]; }
};

/// A_k = 2/(b-a) Re{ phi(k pi/(b-a)) exp(-i k pi a/(b-a)) }, k = 0..K.
/// Frequencies are sampled concurrently; a non-finite sample raises
/// NumericError naming k.
CosExpansion sample_coefficients(const CharFn1D& cf, double a, double b, int K);

/// Filtered COS CDF
///   F(x) = A_0/2 (x-a) + sum_k A_k sigma(k/K) (b-a)/(k pi) sin(k pi (x-a)/(b-a))
/// for x in [a, b]. The raw series value is returned; Gibbs over- and
/// undershoot are not clamped.
double filtered_cdf(const CosExpansion& exp, const FilterSpec& filter, double x);

/// Precomputed sine-series weights for repeated CDF evaluation of one
/// expansion and filter.
class FilteredCdf {
public:
  FilteredCdf(const CosExpansion& exp, const FilterSpec& filter);

  /// Throws DomainError outside [a, b].
  double operator()(double x) const;

  /// Values at sorted query points, clamped to [0, 1] and made monotone by a
  /// running maximum. Intended for presenting CDFs, not for error analysis.
  std::vector<double> clamped(std::span<const double> sorted_x) const;

  double a() const { return a_; }
  double b() const { return b_; }

private:
  double a_, b_, length_, slope_;
  std::vector<double> weights_;  // weights_[k-1] = A_k sigma(k/K) (b-a)/(k pi)
};

/// PMF masses m_i = F(X_i + dx) - F(X_i - dx) at the given support points.
/// Requires a strictly increasing support inside (a, b), dx > 0, dx less than
/// half of every adjacent gap, and X_1 - dx >= a, X_M + dx <= b.
std::vector<double> recover_pmf(const CosExpansion& exp, const FilterSpec& filter,
                                std::span<const double> support, double dx);

/// Integrals C_k = int_a^b x^q cos(k pi (x-a)/(b-a)) dx for k = 1..K, by the
/// closed-form integration-by-parts recurrence in q. Entry k-1 holds C_k.
std::vector<double> cosine_power_integrals(double a, double b, int K, int q);

/// q-th raw moment of the filtered expansion:
///   A_0/(2(q+1)) (b^{q+1} - a^{q+1}) + sum_k sigma(k/K) A_k C_k.
double cos_moment(const CosExpansion& exp, const FilterSpec& filter, int q);

struct Rectangle {
  double a1, b1, a2, b2;
};

/// A_{k1,k2} = (A+ + A-)/2 with
///   A± = 4/(L1 L2) Re{ phi(w1, ±w2) exp(-i w1 a1 ∓ i w2 a2) },
///   w_j = k_j pi / L_j.
CosExpansion2D sample_coefficients_2d(const CharFn2D& cf, const Rectangle& box, int K1, int K2);

/// Filtered bivariate COS CDF on the truncation rectangle.
double filtered_cdf_2d(const CosExpansion2D& exp, const FilterSpec& filter, double x1, double x2);

}  // namespace discos
