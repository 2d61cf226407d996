#pragma once

#include <cmath>
#include <concepts>

namespace discos {

/// Neumaier's variant of Kahan summation.
template <std::floating_point T>
class CompensatedSum {
public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(T init) : sum_(init) {}

  constexpr void add(T v) {
    const T t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  constexpr CompensatedSum& operator+=(T v) {
    add(v);
    return *this;
  }

  constexpr T value() const { return sum_ + comp_; }

private:
  T sum_ = 0;
  T comp_ = 0;
};

/// sin(pi * m) with exact argument reduction; returns exactly 0 at integers.
/// `m_lo` carries the low-order part of m when it comes from an inexact
/// product (see sinpi_product).
template <std::floating_point T>
T sinpi(T m, T m_lo = T(0)) {
  constexpr T pi = T(3.141592653589793238462643383279502884L);
  // r in [0, 2); subtraction of an even integer is exact.
  T r = m - T(2) * std::floor(m / T(2));
  T sign = 1;
  if (r >= T(1)) {
    r -= T(1);
    sign = -1;
  }
  r += m_lo;
  if (r == T(0)) return T(0);
  if (r > T(0.5)) r = T(1) - r;
  return sign * std::sin(pi * r);
}

/// cos(pi * m) with exact argument reduction.
template <std::floating_point T>
T cospi(T m, T m_lo = T(0)) {
  constexpr T pi = T(3.141592653589793238462643383279502884L);
  T r = m - T(2) * std::floor(m / T(2));
  if (r > T(1)) {
    r = T(2) - r;
    m_lo = -m_lo;
  }
  r += m_lo;
  if (r <= T(0.25)) return std::cos(pi * r);
  if (r <= T(0.75)) return std::sin(pi * (T(0.5) - r));
  return -std::cos(pi * (T(1) - r));
}

/// cos(pi * k * t) with the rounding error of k*t carried along.
template <std::floating_point T>
T cospi_product(T k, T t) {
  const T hi = k * t;
  const T lo = std::fma(k, t, -hi);
  return cospi(hi, lo);
}

/// sin(pi * k * t) evaluated with the rounding error of k*t carried along.
template <std::floating_point T>
T sinpi_product(T k, T t) {
  const T hi = k * t;
  const T lo = std::fma(k, t, -hi);
  return sinpi(hi, lo);
}

}  // namespace discos
