#include "discos/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "discos/errors.hpp"
#include "discos/parallel.hpp"
#include "discos/summation.hpp"

namespace discos {

namespace {

struct Atom {
  double x;
  double p;
};

// Clusters sorted atoms: an atom joins the current cluster while it lies
// within tol of the cluster's first atom.
std::vector<Atom> cluster_sorted(const std::vector<Atom>& atoms, double tol) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  std::size_t i = 0;
  while (i < atoms.size()) {
    const double start = atoms[i].x;
    CompensatedSum<double> mass;
    CompensatedSum<double> moment;
    std::size_t j = i;
    for (; j < atoms.size() && atoms[j].x - start <= tol; ++j) {
      mass += atoms[j].p;
      moment += atoms[j].p * atoms[j].x;
    }
    const double m = mass.value();
    const double x = (j - i == 1 || m <= 0.0) ? start : std::clamp(moment.value() / m, start, atoms[j - 1].x);
    out.push_back({x, m});
    i = j;
  }
  return out;
}

DiscreteDist to_dist(const std::vector<Atom>& atoms) {
  std::vector<double> xs, ps;
  xs.reserve(atoms.size());
  ps.reserve(atoms.size());
  for (const auto& at : atoms) {
    xs.push_back(at.x);
    ps.push_back(at.p);
  }
  return DiscreteDist(std::move(xs), std::move(ps));
}

double power(double x, int q) {
  double r = 1.0;
  for (int i = 0; i < q; ++i) r *= x;
  return r;
}

}  // namespace

double exact_cdf(const DiscreteDist& dist, double x) {
  const auto& pts = dist.points();
  const auto end = std::upper_bound(pts.begin(), pts.end(), x);
  CompensatedSum<double> s;
  for (auto it = pts.begin(); it != end; ++it) s += dist.probs()[static_cast<std::size_t>(it - pts.begin())];
  return s.value();
}

double exact_moment(const DiscreteDist& dist, int q) {
  if (q < 0) throw DomainError("q: moment order must be >= 0, got " + std::to_string(q));
  CompensatedSum<double> s;
  for (std::size_t m = 0; m < dist.size(); ++m) s += dist.probs()[m] * power(dist.points()[m], q);
  return s.value();
}

double exact_cdf_2d(const DiscreteDist2D& dist, double x1, double x2) {
  CompensatedSum<double> s;
  for (std::size_t m = 0; m < dist.probs.size(); ++m) {
    if (dist.x1[m] <= x1 && dist.x2[m] <= x2) s += dist.probs[m];
  }
  return s.value();
}

DiscreteDist gpb_enumerate(const GpbSpec& spec) {
  spec.validate();
  const std::size_t N = spec.size();
  if (N > kEnumerateMaxTrials) {
    throw SizeError("gpb_enumerate: " + std::to_string(N) + " trials exceed the enumeration limit of " +
                    std::to_string(kEnumerateMaxTrials) + "; use gpb_convolve");
  }
  std::vector<Atom> outcomes{{0.0, 1.0}};
  outcomes.reserve(std::size_t{1} << N);
  for (std::size_t n = 0; n < N; ++n) {
    const std::size_t half = outcomes.size();
    outcomes.resize(2 * half);
    for (std::size_t i = 0; i < half; ++i) {
      const Atom base = outcomes[i];
      outcomes[i] = {base.x + spec.a[n], base.p * (1.0 - spec.p[n])};
      outcomes[half + i] = {base.x + spec.b[n], base.p * spec.p[n]};
    }
  }
  std::sort(outcomes.begin(), outcomes.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
  return to_dist(cluster_sorted(outcomes, 1e-12));
}

DiscreteDist gpb_convolve(const GpbSpec& spec, double grid_tol) {
  spec.validate();
  if (!(grid_tol >= 0.0)) throw DomainError("grid_tol: must be >= 0");
  std::vector<Atom> support{{0.0, 1.0}};
  std::vector<Atom> lo, hi, merged;
  for (std::size_t n = 0; n < spec.size(); ++n) {
    lo.resize(support.size());
    hi.resize(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
      lo[i] = {support[i].x + spec.a[n], support[i].p * (1.0 - spec.p[n])};
      hi[i] = {support[i].x + spec.b[n], support[i].p * spec.p[n]};
    }
    merged.resize(2 * support.size());
    std::merge(lo.begin(), lo.end(), hi.begin(), hi.end(), merged.begin(),
               [](const Atom& l, const Atom& r) { return l.x < r.x; });
    support = cluster_sorted(merged, grid_tol);
    if (support.size() > kConvolveMaxSupport) {
      throw SizeError("gpb_convolve: support grew to " + std::to_string(support.size()) + " atoms after trial " +
                      std::to_string(n + 1) + " (limit " + std::to_string(kConvolveMaxSupport) +
                      "); increase grid_tol");
    }
  }
  return to_dist(support);
}

CosExpansion direct_coefficients(const DiscreteDist& dist, double a, double b, int K) {
  if (!(b > a)) throw DomainError("direct_coefficients: need a < b");
  if (K < 0) throw DomainError("K: must be >= 0");
  const double L = b - a;
  for (std::size_t m = 0; m < dist.size(); ++m) {
    const double x = dist.points()[m];
    if (x < a || x > b) {
      throw DomainError("direct_coefficients: atom " + std::to_string(x) + " lies outside [" + std::to_string(a) +
                        ", " + std::to_string(b) + "]");
    }
  }
  CosExpansion out{a, b, K, std::vector<double>(static_cast<std::size_t>(K) + 1)};
  for (int k = K; k >= 0; --k) {
    CompensatedSum<double> s;
    for (std::size_t m = 0; m < dist.size(); ++m) {
      s += dist.probs()[m] * cospi_product(static_cast<double>(k), (dist.points()[m] - a) / L);
    }
    out.coeffs[static_cast<std::size_t>(k)] = 2.0 / L * s.value();
  }
  return out;
}

CosExpansion2D direct_coefficients_2d(const DiscreteDist2D& dist, const Rectangle& box, int K1, int K2) {
  dist.validate();
  if (!(box.b1 > box.a1) || !(box.b2 > box.a2)) throw DomainError("direct_coefficients_2d: empty rectangle");
  if (K1 < 0 || K2 < 0) throw DomainError("K1/K2: must be >= 0");
  const double L1 = box.b1 - box.a1;
  const double L2 = box.b2 - box.a2;
  const std::size_t M = dist.probs.size();
  std::vector<double> t1(M), t2(M);
  for (std::size_t m = 0; m < M; ++m) {
    if (dist.x1[m] < box.a1 || dist.x1[m] > box.b1 || dist.x2[m] < box.a2 || dist.x2[m] > box.b2) {
      throw DomainError("direct_coefficients_2d: atom " + std::to_string(m) + " lies outside the rectangle");
    }
    t1[m] = (dist.x1[m] - box.a1) / L1;
    t2[m] = (dist.x2[m] - box.a2) / L2;
  }
  CosExpansion2D out{box.a1, box.b1, box.a2, box.b2, K1, K2,
                     std::vector<double>(static_cast<std::size_t>(K1 + 1) * static_cast<std::size_t>(K2 + 1))};
  const double scale = 4.0 / (L1 * L2);
  for (int k1 = 0; k1 <= K1; ++k1) {
    for (int k2 = 0; k2 <= K2; ++k2) {
      CompensatedSum<double> s;
      for (std::size_t m = 0; m < M; ++m) {
        s += dist.probs[m] * cospi_product(static_cast<double>(k1), t1[m]) *
             cospi_product(static_cast<double>(k2), t2[m]);
      }
      out.coeffs[static_cast<std::size_t>(k1) * static_cast<std::size_t>(K2 + 1) + static_cast<std::size_t>(k2)] =
          scale * s.value();
    }
  }
  return out;
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += W0;
      key[1] += W1;
    }
    const std::uint64_t p0 = std::uint64_t{M0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{M1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

std::uint64_t RandomStream::next_u64() {
  if (used_ >= 4) {
    buffer_ = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                         key_);
    ++block_;
    used_ = 0;
  }
  const std::uint64_t v = (std::uint64_t{buffer_[used_]} << 32) | buffer_[used_ + 1];
  used_ += 2;
  return v;
}

double RandomStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential(double rate) { return -std::log(uniform()) / rate; }

Sampler discrete_sampler(const DiscreteDist& dist) {
  std::vector<double> cumulative(dist.size());
  CompensatedSum<double> s;
  for (std::size_t m = 0; m < dist.size(); ++m) {
    s += dist.probs()[m];
    cumulative[m] = s.value();
  }
  return [points = dist.points(), cumulative = std::move(cumulative)](RandomStream& rng) {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return points[static_cast<std::size_t>(it - cumulative.begin())];
  };
}

Sampler gpb_sampler(const GpbSpec& spec) {
  spec.validate();
  return [spec](RandomStream& rng) {
    double x = 0.0;
    for (std::size_t n = 0; n < spec.size(); ++n) x += rng.uniform() < spec.p[n] ? spec.b[n] : spec.a[n];
    return x;
  };
}

Sampler hawkes_count_sampler(const HawkesModel& model) {
  model.validate();
  return [m = model](RandomStream& rng) {
    constexpr long kMaxEvents = 10'000'000;
    double s = m.t;
    double lambda = m.lambda_t;
    long events = 0;
    for (;;) {
      const double ceiling = std::max(lambda, m.c);
      const double wait = rng.exponential(ceiling);
      if (s + wait > m.T) break;
      s += wait;
      lambda = m.c + (lambda - m.c) * std::exp(-m.kappa * wait);
      if (rng.uniform() * ceiling <= lambda) {
        ++events;
        lambda += m.delta * rng.exponential(m.loss_rate);
        if (events > kMaxEvents) throw NumericError("hawkes sampler: event count exploded");
      }
    }
    return static_cast<double>(m.N_t + events);
  };
}

std::vector<double> monte_carlo_samples(const Sampler& sampler, std::size_t n_paths, std::uint64_t seed) {
  if (n_paths < 1) throw DomainError("paths: must be >= 1");
  std::vector<double> samples(n_paths);
  parallel_for(n_paths, [&](std::size_t i) {
    RandomStream rng(seed, i);
    samples[i] = sampler(rng);
  });
  std::sort(samples.begin(), samples.end());
  return samples;
}

MonteCarloCdf monte_carlo_cdf(const Sampler& sampler, std::size_t n_paths, std::span<const double> x_grid,
                              std::uint64_t seed) {
  const std::vector<double> samples = monte_carlo_samples(sampler, n_paths, seed);
  MonteCarloCdf out;
  out.seed = seed;
  out.paths = n_paths;
  out.standard_error = 0.5 / std::sqrt(static_cast<double>(n_paths));
  out.cdf.reserve(x_grid.size());
  for (double x : x_grid) {
    const auto count = std::upper_bound(samples.begin(), samples.end(), x) - samples.begin();
    out.cdf.push_back(static_cast<double>(count) / static_cast<double>(n_paths));
  }
  return out;
}

double hawkes_mean_ode(const HawkesModel& model, int steps) {
  model.validate();
  if (steps < 1) throw DomainError("steps: must be >= 1, got " + std::to_string(steps));
  const double r = model.kappa - model.delta / model.loss_rate;
  const double kc = model.kappa * model.c;
  const double h = -(model.T - model.t) / steps;
  double alpha = 0.0, beta = 0.0;
  auto f_beta = [r](double b) { return r * b - 1.0; };
  for (int i = 0; i < steps; ++i) {
    const double kb1 = f_beta(beta), ka1 = -kc * beta;
    const double b2 = beta + 0.5 * h * kb1;
    const double kb2 = f_beta(b2), ka2 = -kc * b2;
    const double b3 = beta + 0.5 * h * kb2;
    const double kb3 = f_beta(b3), ka3 = -kc * b3;
    const double b4 = beta + h * kb3;
    const double kb4 = f_beta(b4), ka4 = -kc * b4;
    beta += h / 6.0 * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
    alpha += h / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
  }
  return model.N_t + alpha + beta * model.lambda_t;
}

double hawkes_mean_closed_form(const HawkesModel& model) {
  model.validate();
  const double r = model.kappa - model.delta / model.loss_rate;
  const double tau = model.T - model.t;
  const double kc = model.kappa * model.c;
  // beta(t) = (1 - e^{-r tau})/r, alpha(t) = kc (tau - beta(t))/r; both tend
  // to their r -> 0 limits tau and kc tau^2/2.
  double beta, alpha;
  if (std::abs(r * tau) < 1e-8) {
    beta = tau - r * tau * tau / 2.0;
    alpha = kc * tau * tau / 2.0;
  } else {
    beta = -std::expm1(-r * tau) / r;
    alpha = kc * (tau - beta) / r;
  }
  return model.N_t + alpha + beta * model.lambda_t;
}

std::vector<double> quadrature_moments(const CosExpansion& exp, const FilterSpec& filter, int max_q,
                                       std::size_t n) {
  filter.validate();
  if (max_q < 1) throw DomainError("q: must be >= 1");
  if (n < 2) throw DomainError("quadrature_moments: need at least 2 panels");
  const int K = exp.K;
  std::vector<double> c(static_cast<std::size_t>(K) + 1);
  c[0] = exp.coeffs[0] / 2.0;
  for (int k = 1; k <= K; ++k) {
    c[static_cast<std::size_t>(k)] =
        eval_filter(filter, static_cast<double>(k) / K, K) * exp.coeffs[static_cast<std::size_t>(k)];
  }
  const std::size_t fine = 2 * n;
  std::vector<double> density(fine + 1);
  parallel_for(fine + 1, [&](std::size_t j) {
    const double cos_t = cospi(static_cast<double>(j) / static_cast<double>(fine));
    double b1 = 0.0, b2 = 0.0;
    for (int k = K; k >= 1; --k) {
      const double b0 = c[static_cast<std::size_t>(k)] + 2.0 * cos_t * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    density[j] = c[0] + b1 * cos_t - b2;
  });

  const double L = exp.length();
  const double h_fine = L / static_cast<double>(fine);
  std::vector<double> out;
  for (int q = 1; q <= max_q; ++q) {
    CompensatedSum<double> s_fine, s_coarse;
    for (std::size_t j = 0; j <= fine; ++j) {
      const double x = exp.a + static_cast<double>(j) * h_fine;
      const double w = (j == 0 || j == fine) ? 0.5 : 1.0;
      const double v = w * power(x, q) * density[j];
      s_fine += v;
      if (j % 2 == 0) s_coarse += v;
    }
    const double t_fine = h_fine * s_fine.value();
    const double t_coarse = 2.0 * h_fine * s_coarse.value();
    out.push_back((4.0 * t_fine - t_coarse) / 3.0);
  }
  return out;
}

}  // namespace discos
