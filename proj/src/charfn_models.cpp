#include "discos/charfn_models.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "discos/errors.hpp"
#include "discos/summation.hpp"

namespace discos {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_probability_vector(const std::vector<double>& probs, const std::string& field) {
  CompensatedSum<double> total;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) {
      throw ValidationError(field + "[" + std::to_string(i) + "]: probability must be >= 0, got " +
                            std::to_string(probs[i]));
    }
    total += probs[i];
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw ValidationError(field + ": probabilities sum to " + std::to_string(total.value()) +
                          ", expected 1 within 1e-12");
  }
}

}  // namespace

DiscreteDist::DiscreteDist(std::vector<double> points, std::vector<double> probs)
    : points_(std::move(points)), probs_(std::move(probs)) {
  if (points_.empty()) throw ValidationError("points: at least one atom is required");
  if (points_.size() != probs_.size()) {
    throw ValidationError("probs: length " + std::to_string(probs_.size()) +
                          " does not match points length " + std::to_string(points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) {
      throw ValidationError("points[" + std::to_string(i) + "]: not finite");
    }
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      throw ValidationError("points[" + std::to_string(i) + "]: atoms must be strictly increasing");
    }
  }
  check_probability_vector(probs_, "probs");
}

void DiscreteDist2D::validate() const {
  if (x1.empty()) throw ValidationError("points: at least one atom is required");
  if (x1.size() != x2.size() || x1.size() != probs.size()) {
    throw ValidationError("probs: bivariate atoms and probabilities differ in length");
  }
  for (std::size_t i = 0; i < x1.size(); ++i) {
    if (!std::isfinite(x1[i]) || !std::isfinite(x2[i])) {
      throw ValidationError("points[" + std::to_string(i) + "]: not finite");
    }
  }
  check_probability_vector(probs, "probs");
}

void GpbSpec::validate() const {
  if (p.empty()) throw ValidationError("p: at least one trial is required");
  if (a.size() != p.size() || b.size() != p.size()) {
    throw ValidationError("a/b/p: lengths differ (" + std::to_string(a.size()) + ", " +
                          std::to_string(b.size()) + ", " + std::to_string(p.size()) + ")");
  }
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (!(p[n] >= 0.0 && p[n] <= 1.0)) {
      throw ValidationError("p[" + std::to_string(n) + "]: must lie in [0, 1], got " + std::to_string(p[n]));
    }
    if (!std::isfinite(a[n]) || !std::isfinite(b[n])) {
      throw ValidationError("a/b[" + std::to_string(n) + "]: outcome values must be finite");
    }
  }
}

GpbSpec GpbSpec::poisson_binomial(std::vector<double> p) {
  GpbSpec spec;
  spec.a.assign(p.size(), 0.0);
  spec.b.assign(p.size(), 1.0);
  spec.p = std::move(p);
  return spec;
}

void HawkesModel::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(field) + ": must be positive, got " + std::to_string(v));
    }
  };
  positive(kappa, "kappa");
  positive(c, "c");
  positive(delta, "delta");
  positive(loss_rate, "loss_rate");
  if (!std::isfinite(t) || !std::isfinite(T) || !(T >= t)) {
    throw ValidationError("T: must satisfy T >= t");
  }
  if (!(lambda_t >= 0.0) || !std::isfinite(lambda_t)) {
    throw ValidationError("lambda_t: must be >= 0");
  }
  if (!std::isfinite(L_t)) throw ValidationError("L_t: not finite");
  if (N_t < 0) throw ValidationError("N_t: must be a nonnegative integer");
}

CharFn1D charfn_discrete(const DiscreteDist& dist) {
  return [points = dist.points(), probs = dist.probs()](double w) {
    Complex sum{0.0, 0.0};
    for (std::size_t m = 0; m < points.size(); ++m) sum += probs[m] * std::exp(kI * (w * points[m]));
    return sum;
  };
}

CharFn2D charfn_discrete_2d(const DiscreteDist2D& dist) {
  dist.validate();
  return [dist](double w1, double w2) {
    Complex sum{0.0, 0.0};
    for (std::size_t m = 0; m < dist.probs.size(); ++m) {
      sum += dist.probs[m] * std::exp(kI * (w1 * dist.x1[m] + w2 * dist.x2[m]));
    }
    return sum;
  };
}

CharFn1D charfn_gpb(const GpbSpec& spec) {
  spec.validate();
  return [spec](double w) {
    Complex prod{1.0, 0.0};
    for (std::size_t n = 0; n < spec.size(); ++n) {
      prod *= (1.0 - spec.p[n]) * std::exp(kI * (w * spec.a[n])) + spec.p[n] * std::exp(kI * (w * spec.b[n]));
    }
    return prod;
  };
}

Complex exponential_loss_transform(double rate, Complex w) {
  const Complex gap = rate - w;
  if (std::abs(gap) < 1e-12) {
    throw NumericError("hawkes: loss transform argument " + std::to_string(w.real()) + "+" +
                       std::to_string(w.imag()) + "i hits the pole at loss_rate");
  }
  return rate / gap;
}

OdeSolution solve_hawkes_ode(const HawkesModel& model, Complex u1, Complex u2, int steps) {
  model.validate();
  if (steps < 1) throw DomainError("hawkes: steps must be >= 1, got " + std::to_string(steps));
  if (u1.real() > 0.0 || u2.real() > 0.0) {
    throw DomainError("hawkes: transform argument u needs non-positive real parts");
  }

  const Complex jump = std::exp(u2);
  struct State {
    Complex b, a;
  };
  auto rhs = [&](const State& y) -> State {
    const Complex theta = exponential_loss_transform(model.loss_rate, model.delta * y.b + u1);
    return {model.kappa * y.b + 1.0 - theta * jump, -model.kappa * model.c * y.b};
  };

  const double h = -(model.T - model.t) / steps;
  State y{{0.0, 0.0}, {0.0, 0.0}};
  if (h != 0.0) {
    for (int i = 0; i < steps; ++i) {
      const State k1 = rhs(y);
      const State k2 = rhs({y.b + 0.5 * h * k1.b, y.a + 0.5 * h * k1.a});
      const State k3 = rhs({y.b + 0.5 * h * k2.b, y.a + 0.5 * h * k2.a});
      const State k4 = rhs({y.b + h * k3.b, y.a + h * k3.a});
      y.b += h / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
      y.a += h / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
      if (!std::isfinite(y.b.real()) || !std::isfinite(y.b.imag()) || !std::isfinite(y.a.real()) ||
          !std::isfinite(y.a.imag())) {
        throw NumericError("hawkes: ODE state not finite at step " + std::to_string(i + 1));
      }
      // Bounded transform: Re b stays in the left half plane.
      if (y.b.real() > 1e-12 * (1.0 + std::abs(y.b))) {
        throw NumericError("hawkes: Re b(s) = " + std::to_string(y.b.real()) + " > 0 at step " +
                           std::to_string(i + 1));
      }
    }
  }
  return {y.a, y.b, steps, h};
}

Complex hawkes_transform(const HawkesModel& model, Complex u1, Complex u2, int steps) {
  const OdeSolution sol = solve_hawkes_ode(model, u1, u2, steps);
  return std::exp(sol.a_t + sol.b_t * model.lambda_t + u1 * model.L_t + u2 * static_cast<double>(model.N_t));
}

CharFn1D hawkes_count_charfn(const HawkesModel& model, int steps) {
  model.validate();
  return [model, steps](double w) { return hawkes_transform(model, 0.0, kI * w, steps); };
}

CharFn2D hawkes_joint_charfn(const HawkesModel& model, int steps) {
  model.validate();
  return [model, steps](double w1, double w2) { return hawkes_transform(model, kI * w1, kI * w2, steps); };
}

}  // namespace discos
