#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "discos/cos_engine.hpp"

namespace discos {

/// Finite discrete law: strictly increasing atoms with nonnegative masses
/// summing to one (within 1e-12).
class DiscreteDist {
public:
  /// Throws ValidationError when the invariants fail.
  DiscreteDist(std::vector<double> points, std::vector<double> probs);

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return points_.size(); }

private:
  std::vector<double> points_;
  std::vector<double> probs_;
};

/// Finite bivariate law given atom by atom. Atoms need not be distinct.
struct DiscreteDist2D {
  std::vector<double> x1;
  std::vector<double> x2;
  std::vector<double> probs;

  void validate() const;
};

/// Generalized Poisson-binomial: X = sum_n (a_n (1 - I_n) + b_n I_n) with
/// independent I_n ~ Bernoulli(p_n). a = 0, b = 1 gives the Poisson-binomial.
struct GpbSpec {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> p;

  std::size_t size() const { return p.size(); }
  void validate() const;

  static GpbSpec poisson_binomial(std::vector<double> p);
};

/// Affine Hawkes default model with exponential losses:
///   d lambda = kappa (c - lambda) dt + delta dL,  losses ~ Exp(loss_rate),
/// observed at time t with state (lambda_t, L_t, N_t), horizon T.
struct HawkesModel {
  double kappa = 0.0;
  double c = 0.0;
  double delta = 0.0;
  double loss_rate = 0.0;
  double t = 0.0;
  double T = 0.0;
  double lambda_t = 0.0;
  double L_t = 0.0;
  int N_t = 0;

  void validate() const;
};

struct OdeSolution {
  Complex a_t;
  Complex b_t;
  int steps = 0;
  double step_size = 0.0;
};

/// phi(w) = sum_m p_m exp(i w X_m).
CharFn1D charfn_discrete(const DiscreteDist& dist);

/// phi(w1, w2) = sum_m p_m exp(i (w1 X1_m + w2 X2_m)).
CharFn2D charfn_discrete_2d(const DiscreteDist2D& dist);

/// phi(w) = prod_n ((1 - p_n) exp(i w a_n) + p_n exp(i w b_n)).
CharFn1D charfn_gpb(const GpbSpec& spec);

/// Laplace-type transform of the Exp(rate) loss law, theta(w) = E[exp(w l)]
/// = rate/(rate - w), valid for Re(w) < rate. Throws NumericError within
/// 1e-12 of the pole.
Complex exponential_loss_transform(double rate, Complex w);

/// Integrates the transform ODEs
///   b' = kappa b + 1 - theta(delta b + u1) exp(u2),   a' = -kappa c b,
/// backward from a(T) = b(T) = 0 to time t with fixed-step classical RK4.
/// Requires Re(u1), Re(u2) <= 0; checks Re(b) <= 0 after every step.
OdeSolution solve_hawkes_ode(const HawkesModel& model, Complex u1, Complex u2, int steps);

/// E[exp(u . J_T) | F_t] = exp(a(t) + b(t) lambda_t + u . J_t), J = (L, N).
Complex hawkes_transform(const HawkesModel& model, Complex u1, Complex u2, int steps);

/// Conditional ch.f. of the count N_T: w -> hawkes_transform(model, 0, i w).
CharFn1D hawkes_count_charfn(const HawkesModel& model, int steps);

/// Joint conditional ch.f. of (L_T, N_T).
CharFn2D hawkes_joint_charfn(const HawkesModel& model, int steps);

inline constexpr int kDefaultHawkesSteps = 2000;

}  // namespace discos
