#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "discos/charfn_models.hpp"
#include "discos/cos_engine.hpp"

namespace discos {

/// F(x) = sum of masses at atoms <= x (right-continuous).
double exact_cdf(const DiscreteDist& dist, double x);

/// E[X^q].
double exact_moment(const DiscreteDist& dist, int q);

/// P(X1 <= x1, X2 <= x2).
double exact_cdf_2d(const DiscreteDist2D& dist, double x1, double x2);

inline constexpr std::size_t kEnumerateMaxTrials = 24;
inline constexpr std::size_t kConvolveMaxSupport = 1'000'000;

/// All 2^N outcomes of a GPB law, sorted, with atoms closer than 1e-12
/// merged. N above kEnumerateMaxTrials raises SizeError.
DiscreteDist gpb_enumerate(const GpbSpec& spec);

/// Trial-by-trial convolution of a GPB law. After each trial, sorted atoms
/// within `grid_tol` of the first atom of their cluster are merged into one
/// atom at the mass-weighted mean position. A support larger than
/// kConvolveMaxSupport raises SizeError.
DiscreteDist gpb_convolve(const GpbSpec& spec, double grid_tol = 1e-9);

/// A_k = 2/(b-a) sum_m p_m cos(k pi (X_m - a)/(b-a)), k = 0..K, without going
/// through the characteristic function. Atoms outside [a, b] raise DomainError.
CosExpansion direct_coefficients(const DiscreteDist& dist, double a, double b, int K);

/// A_{k1,k2} = 4/(L1 L2) sum_m p_m cos(k1 pi (X1_m - a1)/L1) cos(k2 pi (X2_m - a2)/L2).
CosExpansion2D direct_coefficients_2d(const DiscreteDist2D& dist, const Rectangle& box, int K1,
                                      int K2);

/// Philox4x32-10 counter-based block cipher.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Random stream number `stream` of generator `seed`. Blocks are
/// philox4x32((block, stream), seed), so every stream is reproducible on
/// its own regardless of which thread consumes it.
class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();

  /// Exponential with the given rate.
  double exponential(double rate);

private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

/// Draws one sample of a scalar random variable.
using Sampler = std::function<double(RandomStream&)>;

Sampler discrete_sampler(const DiscreteDist& dist);
Sampler gpb_sampler(const GpbSpec& spec);

/// N_T given the observed state, simulated by Ogata thinning. Between
/// events the intensity relaxes monotonically towards c, so max(lambda, c)
/// dominates it until the next accepted event.
Sampler hawkes_count_sampler(const HawkesModel& model);

struct MonteCarloCdf {
  std::vector<double> cdf;
  double standard_error = 0.0;  ///< 0.5 / sqrt(n_paths), the worst case over x
  std::uint64_t seed = 0;
  std::size_t paths = 0;
};

/// n_paths samples sorted ascending. Path i uses RandomStream(seed, i).
std::vector<double> monte_carlo_samples(const Sampler& sampler, std::size_t n_paths, std::uint64_t seed);

/// Empirical CDF of n_paths samples at each grid point. Path i uses
/// RandomStream(seed, i); the result does not depend on the thread count.
MonteCarloCdf monte_carlo_cdf(const Sampler& sampler, std::size_t n_paths,
                              std::span<const double> x_grid, std::uint64_t seed);

/// E[N_T | F_t] from the first-moment ODEs
///   beta' = (kappa - delta/loss_rate) beta - 1,  alpha' = -kappa c beta,
/// zero at T, integrated backward with the same fixed-step RK4 as the
/// transform: mean = N_t + alpha(t) + beta(t) lambda_t.
double hawkes_mean_ode(const HawkesModel& model, int steps);

/// Closed-form solution of the same moment equations.
double hawkes_mean_closed_form(const HawkesModel& model);

/// Moments q = 1..max_q of the filtered COS density
///   f(x) = A_0/2 + sum_k sigma(k/K) A_k cos(k pi (x-a)/(b-a)),
/// by Richardson-extrapolated trapezoid rules on n and 2n panels over [a, b].
/// The cosine series is evaluated by Clenshaw's recurrence. Entry q-1 holds
/// the q-th moment.
std::vector<double> quadrature_moments(const CosExpansion& exp, const FilterSpec& filter, int max_q,
                                       std::size_t n = 100000);

}  // namespace discos
