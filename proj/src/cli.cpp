#include "discos/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "discos/cos_engine.hpp"
#include "discos/errors.hpp"
#include "discos/filters.hpp"
#include "discos/gibbs_kernels.hpp"
#include "discos/model_io.hpp"
#include "discos/oracles.hpp"
#include "discos/summation.hpp"
#include "discos/truncation.hpp"

#ifndef DISCOS_VERSION
#define DISCOS_VERSION "0.0.0"
#endif

namespace discos::cli {

namespace {

struct RunConfig {
  std::string command;
  std::string quantity;  // oracle: cdf|pmf|moment
  std::string model_path;
  std::string a, b;
  std::string range;
  std::string box;
  std::vector<int> Ks;
  int K1 = 0, K2 = 0;
  std::string filter;
  std::string alpha = "eps";
  int exp_order = 2;
  std::vector<std::string> at;
  double dx = 0.0;
  std::vector<int> q;
  int steps = kDefaultHawkesSteps;
  int grid = 1000;
  std::string x = "0.5";
  std::size_t paths = 1'000'000;
  std::uint64_t seed = 1;
  std::string method = "exact";
  double grid_tol = 1e-9;
  std::string output;
};

// Shortest round-trip representation.
std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

// Data cells: scientific notation with 17 significant digits.
std::string cell(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_same_v<T, std::string>) {
      s += xs[i];
    } else if constexpr (std::is_floating_point_v<T>) {
      s += num(xs[i]);
    } else {
      s += std::to_string(xs[i]);
    }
  }
  return s;
}

double parse_real(std::string_view text, const std::string& field) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ValidationError(field + ": cannot parse '" + std::string(text) + "' as a number");
  }
  return v;
}

// Everything a command writes: provenance header, column names, rows and
// optional trailing comment lines.
struct Table {
  std::vector<std::string> canonical;
  std::vector<std::pair<std::string, std::string>> params;
  std::string columns;
  std::vector<std::string> rows;
  std::vector<std::string> footer;

  void row(std::initializer_list<std::string> cells) {
    std::string line;
    for (const auto& c : cells) {
      if (!line.empty()) line += ',';
      line += c;
    }
    rows.push_back(std::move(line));
  }

  std::string render() const {
    std::ostringstream os;
    os << "# discos " << DISCOS_VERSION << '\n';
    os << "# command:";
    for (const auto& tok : canonical) os << ' ' << tok;
    os << '\n';
    os << '#';
    for (const auto& [k, v] : params) os << ' ' << k << '=' << v;
    os << '\n';
    os << columns << '\n';
    for (const auto& r : rows) os << r << '\n';
    for (const auto& f : footer) os << "# " << f << '\n';
    return os.str();
  }
};

class Runner {
public:
  Runner(RunConfig cfg, std::set<std::string> given) : cfg_(std::move(cfg)), given_(std::move(given)) {}

  // Returns the exit status; fills `table`.
  int execute(Table& table);

private:
  bool has(const std::string& key) const { return given_.count(key) > 0; }

  void check_flags(std::initializer_list<const char*> allowed) const;
  FilterSpec filter(const char* default_name);
  int single_K();
  const Model& model();
  CharFn1D charfn();
  Interval interval(const CharFn1D& cf);
  std::vector<double> positions(bool required);
  void base_params(Table& t) const;
  void model_tokens(Table& t) const;

  int cmd_cdf(Table& t);
  int cmd_pmf(Table& t);
  int cmd_moment(Table& t);
  int cmd_cdf2d(Table& t);
  int cmd_bounds(Table& t);
  int cmd_trace(Table& t);
  int cmd_hawkes(Table& t);
  int cmd_gpb(Table& t);
  int cmd_oracle(Table& t);
  int cmd_convergence(Table& t);

  std::vector<double> default_pmf_support(const Interval& iv, double dx) const;
  double default_dx(const std::vector<double>& support) const;
  DiscreteDist exact_law();

  RunConfig cfg_;
  std::set<std::string> given_;
  std::optional<Model> model_;
  std::optional<FilterSpec> filter_;
  std::string range_label_ = "none";
  std::optional<Interval> interval_;
};

void Runner::check_flags(std::initializer_list<const char*> allowed) const {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  ok.insert("output");
  for (const auto& g : given_) {
    if (!ok.count(g)) {
      throw ValidationError("--" + g + ": not used by the '" + cfg_.command + "' command");
    }
  }
}

FilterSpec Runner::filter(const char* default_name) {
  if (!filter_) {
    const std::string name = cfg_.filter.empty() ? default_name : cfg_.filter;
    filter_ = make_filter(name, cfg_.alpha, cfg_.exp_order);
  }
  return *filter_;
}

int Runner::single_K() {
  if (cfg_.Ks.size() != 1) {
    throw ValidationError("-K: the '" + cfg_.command + "' command takes exactly one K, got " +
                          std::to_string(cfg_.Ks.size()));
  }
  if (cfg_.Ks[0] < 1) throw ValidationError("-K: must be >= 1, got " + std::to_string(cfg_.Ks[0]));
  return cfg_.Ks[0];
}

const Model& Runner::model() {
  if (!model_) {
    if (cfg_.model_path.empty()) throw ValidationError("--model: required by the '" + cfg_.command + "' command");
    model_ = load_model(cfg_.model_path);
  }
  return *model_;
}

CharFn1D Runner::charfn() {
  if (cfg_.steps < 1) throw ValidationError("--steps: must be >= 1");
  return model_charfn(model(), cfg_.steps);
}

Interval Runner::interval(const CharFn1D& cf) {
  if (interval_) return *interval_;
  const Model& m = model();
  const bool explicit_ab = has("a") || has("b");
  if (explicit_ab && has("range")) throw ValidationError("--range: cannot be combined with --a/--b");
  if (explicit_ab && !(has("a") && has("b"))) throw ValidationError("--a/--b: both bounds are required");

  RangeRule rule;
  if (explicit_ab) {
    rule.kind = RangeKind::explicit_bounds;
    rule.a = parse_position(cfg_.a);
    rule.b = parse_position(cfg_.b);
    rule.validate();
  } else if (has("range")) {
    rule = parse_range_rule(cfg_.range);
  } else if (std::holds_alternative<HawkesModel>(m)) {
    rule.kind = RangeKind::hawkes_25sigma;
  } else if (const auto* g = std::get_if<GpbSpec>(&m)) {
    CompensatedSum<double> lo, hi;
    for (std::size_t n = 0; n < g->size(); ++n) {
      lo += std::min(g->a[n], g->b[n]);
      hi += std::max(g->a[n], g->b[n]);
    }
    rule.kind = RangeKind::explicit_bounds;
    rule.a = lo.value() - 0.5;
    rule.b = hi.value() + 0.5;
  } else if (const auto* d = std::get_if<DiscreteDist>(&m)) {
    rule.kind = RangeKind::explicit_bounds;
    rule.a = 0.0;
    rule.b = std::numbers::pi;
    if (d->points().front() < rule.a || d->points().back() > rule.b) {
      throw ValidationError("--range: atoms lie outside the default interval [0, pi]; pass --range or --a/--b");
    }
  } else {
    throw ValidationError("--model: '" + model_type(m) + "' is not a univariate model");
  }

  Interval iv;
  switch (rule.kind) {
    case RangeKind::explicit_bounds:
      iv = {rule.a, rule.b};
      break;
    case RangeKind::chebyshev: {
      const MomentEstimate est = charfn_moments(cf);
      iv = chebyshev_range(est.mean, est.variance, rule.tol);
      if (!(iv.b > iv.a)) {
        throw ValidationError("--range: chebyshev interval is degenerate (zero variance); pass explicit bounds");
      }
      break;
    }
    case RangeKind::hawkes_25sigma: {
      const auto* h = std::get_if<HawkesModel>(&m);
      if (!h) throw ValidationError("--range: the hawkes rule needs a hawkes model");
      iv = hawkes_range(*h, cf, 1e-4, rule.sigmas, rule.left_pad_frac);
      break;
    }
  }
  range_label_ = rule.label();
  interval_ = iv;
  return iv;
}

std::vector<double> Runner::positions(bool required) {
  if (cfg_.at.empty()) {
    if (required) throw ValidationError("--at: required by the '" + cfg_.command + "' command");
    return {};
  }
  std::vector<double> xs;
  xs.reserve(cfg_.at.size());
  for (const auto& s : cfg_.at) xs.push_back(parse_position(s));
  return xs;
}

void Runner::base_params(Table& t) const {
  t.params.insert(t.params.begin(), {"version", DISCOS_VERSION});
}

void Runner::model_tokens(Table& t) const {
  t.canonical.push_back("--model");
  t.canonical.push_back(cfg_.model_path);
}

// Common header for single-expansion commands.
void add_expansion_params(Table& t, const std::string& K, const FilterSpec& f, const std::string& range,
                          const Interval& iv, const std::string& seed = "none") {
  t.params.push_back({"K", K});
  t.params.push_back({"filter", f.name()});
  t.params.push_back({"alpha", f.alpha_label()});
  t.params.push_back({"exp_order", f.kind == FilterKind::exponential ? std::to_string(f.order_p) : "none"});
  t.params.push_back({"range", range});
  t.params.push_back({"a", num(iv.a)});
  t.params.push_back({"b", num(iv.b)});
  t.params.push_back({"seed", seed});
}

void add_filter_tokens(Table& t, const FilterSpec& f) {
  t.canonical.push_back("--filter");
  t.canonical.push_back(f.name());
  if (f.kind == FilterKind::exponential) {
    t.canonical.push_back("--alpha");
    t.canonical.push_back(f.alpha_label());
    t.canonical.push_back("--exp-order");
    t.canonical.push_back(std::to_string(f.order_p));
  }
}

std::vector<std::string> position_tokens(const std::vector<double>& xs) {
  std::vector<std::string> s;
  for (double x : xs) s.push_back(num(x));
  return {"--at", join(s)};
}

bool is_integer_lattice(const Model& m) {
  if (std::holds_alternative<HawkesModel>(m)) return true;
  if (const auto* g = std::get_if<GpbSpec>(&m)) {
    for (std::size_t n = 0; n < g->size(); ++n) {
      if (g->a[n] != std::floor(g->a[n]) || g->b[n] != std::floor(g->b[n])) return false;
    }
    return true;
  }
  return false;
}

double Runner::default_dx(const std::vector<double>& support) const {
  if (is_integer_lattice(*model_)) return 0.25;
  if (std::holds_alternative<DiscreteDist>(*model_)) {
    double gap = interval_->b - interval_->a;
    for (std::size_t i = 1; i < support.size(); ++i) gap = std::min(gap, support[i] - support[i - 1]);
    for (double x : support) gap = std::min({gap, 2.0 * (x - interval_->a), 2.0 * (interval_->b - x)});
    return 0.25 * gap;
  }
  throw ValidationError("--dx: required for this model");
}

std::vector<double> Runner::default_pmf_support(const Interval& iv, double dx) const {
  const Model& m = *model_;
  if (const auto* d = std::get_if<DiscreteDist>(&m)) return d->points();
  if (!is_integer_lattice(m)) throw ValidationError("--at: required for non-lattice gpb models");
  double lo = std::ceil(iv.a + dx);
  if (const auto* h = std::get_if<HawkesModel>(&m)) lo = std::max(lo, static_cast<double>(h->N_t));
  const double hi = std::floor(iv.b - dx);
  std::vector<double> xs;
  for (double n = lo; n <= hi; n += 1.0) xs.push_back(n);
  if (xs.empty()) throw ValidationError("--at: no lattice points inside the truncation range");
  return xs;
}

DiscreteDist Runner::exact_law() {
  const Model& m = model();
  if (const auto* d = std::get_if<DiscreteDist>(&m)) return *d;
  if (const auto* g = std::get_if<GpbSpec>(&m)) return gpb_convolve(*g, cfg_.grid_tol);
  throw ValidationError("--model: no exact law for '" + model_type(m) + "' models");
}

int Runner::cmd_cdf(Table& t) {
  check_flags({"model", "a", "b", "range", "K", "filter", "alpha", "exp-order", "at", "steps"});
  const int K = single_K();
  const FilterSpec f = filter("rcos");
  const CharFn1D cf = charfn();
  const Interval iv = interval(cf);
  const std::vector<double> xs = positions(true);
  const FilteredCdf F(sample_coefficients(cf, iv.a, iv.b, K), f);

  model_tokens(t);
  t.canonical.insert(t.canonical.end(), {"--range", range_label_, "-K", std::to_string(K)});
  add_filter_tokens(t, f);
  for (auto& tok : position_tokens(xs)) t.canonical.push_back(tok);
  if (std::holds_alternative<HawkesModel>(model())) t.canonical.insert(t.canonical.end(), {"--steps", std::to_string(cfg_.steps)});
  add_expansion_params(t, std::to_string(K), f, range_label_, iv);
  t.columns = "x,value";
  for (double x : xs) {
    if (x < iv.a || x > iv.b) {
      throw DomainError("--at: x = " + num(x) + " lies outside [" + num(iv.a) + ", " + num(iv.b) + "]");
    }
    t.row({cell(x), cell(F(x))});
  }
  return kExitOk;
}

int Runner::cmd_pmf(Table& t) {
  check_flags({"model", "a", "b", "range", "K", "filter", "alpha", "exp-order", "at", "dx", "steps"});
  const int K = single_K();
  const FilterSpec f = filter("rcos");
  const CharFn1D cf = charfn();
  const Interval iv = interval(cf);
  std::vector<double> xs = positions(false);
  double dx = cfg_.dx;
  if (!has("dx")) {
    if (xs.empty()) xs = default_pmf_support(iv, 0.25);
    dx = default_dx(xs);
  }
  if (xs.empty()) xs = default_pmf_support(iv, dx);
  const std::vector<double> masses = recover_pmf(sample_coefficients(cf, iv.a, iv.b, K), f, xs, dx);

  model_tokens(t);
  t.canonical.insert(t.canonical.end(), {"--range", range_label_, "-K", std::to_string(K)});
  add_filter_tokens(t, f);
  if (has("at")) for (auto& tok : position_tokens(xs)) t.canonical.push_back(tok);
  t.canonical.insert(t.canonical.end(), {"--dx", num(dx)});
  if (std::holds_alternative<HawkesModel>(model())) t.canonical.insert(t.canonical.end(), {"--steps", std::to_string(cfg_.steps)});
  add_expansion_params(t, std::to_string(K), f, range_label_, iv);
  t.params.push_back({"dx", num(dx)});
  t.columns = "x,value";
  for (std::size_t i = 0; i < xs.size(); ++i) t.row({cell(xs[i]), cell(masses[i])});
  return kExitOk;
}

int Runner::cmd_moment(Table& t) {
  check_flags({"model", "a", "b", "range", "K", "filter", "alpha", "exp-order", "q", "steps"});
  const int K = single_K();
  const FilterSpec f = filter("rcos");
  const CharFn1D cf = charfn();
  const Interval iv = interval(cf);
  const std::vector<int> qs = cfg_.q.empty() ? std::vector<int>{1} : cfg_.q;
  const CosExpansion exp = sample_coefficients(cf, iv.a, iv.b, K);

  model_tokens(t);
  t.canonical.insert(t.canonical.end(), {"--range", range_label_, "-K", std::to_string(K)});
  add_filter_tokens(t, f);
  t.canonical.insert(t.canonical.end(), {"-q", join(qs)});
  if (std::holds_alternative<HawkesModel>(model())) t.canonical.insert(t.canonical.end(), {"--steps", std::to_string(cfg_.steps)});
  add_expansion_params(t, std::to_string(K), f, range_label_, iv);
  t.columns = "q,value";
  for (int q : qs) {
    if (q < 0) throw ValidationError("-q: moment order must be >= 0, got " + std::to_string(q));
    t.row({std::to_string(q), cell(cos_moment(exp, f, q))});
  }
  return kExitOk;
}

int Runner::cmd_cdf2d(Table& t) {
  check_flags({"model", "box", "K", "K1", "K2", "filter", "alpha", "exp-order", "at", "steps"});
  const FilterSpec f = filter("rcos");
  int K1 = cfg_.K1, K2 = cfg_.K2;
  if (has("K")) {
    if (has("K1") || has("K2")) throw ValidationError("-K: cannot be combined with --K1/--K2");
    K1 = K2 = single_K();
  }
  if (K1 < 1 || K2 < 1) throw ValidationError("--K1/--K2: both must be >= 1 (or pass -K)");

  const Model& m = model();
  CharFn2D cf;
  Rectangle box{0.0, std::numbers::pi, 0.0, std::numbers::pi};
  if (const auto* d = std::get_if<DiscreteDist2D>(&m)) {
    cf = charfn_discrete_2d(*d);
  } else if (const auto* h = std::get_if<HawkesModel>(&m)) {
    if (!has("box")) throw ValidationError("--box: required for hawkes models");
    cf = hawkes_joint_charfn(*h, cfg_.steps);
  } else {
    throw ValidationError("--model: cdf2d needs a discrete2d or hawkes model, got '" + model_type(m) + "'");
  }
  if (has("box")) {
    std::vector<double> v;
    std::string_view s = cfg_.box;
    while (true) {
      const auto comma = s.find(',');
      v.push_back(parse_position(s.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      s = s.substr(comma + 1);
    }
    if (v.size() != 4) throw ValidationError("--box: expected a1,b1,a2,b2");
    box = {v[0], v[1], v[2], v[3]};
  }
  if (!(box.b1 > box.a1) || !(box.b2 > box.a2)) throw ValidationError("--box: need a1 < b1 and a2 < b2");
  if (cfg_.at.empty()) throw ValidationError("--at: required by the 'cdf2d' command (pairs x1:x2)");
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : cfg_.at) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ValidationError("--at: expected x1:x2, got '" + s + "'");
    pts.emplace_back(parse_position(std::string_view(s).substr(0, colon)),
                     parse_position(std::string_view(s).substr(colon + 1)));
  }
  const CosExpansion2D exp = sample_coefficients_2d(cf, box, K1, K2);

  model_tokens(t);
  t.canonical.insert(t.canonical.end(), {"--box", num(box.a1) + "," + num(box.b1) + "," + num(box.a2) + "," + num(box.b2),
                                         "--K1", std::to_string(K1), "--K2", std::to_string(K2)});
  add_filter_tokens(t, f);
  std::vector<std::string> at_tokens;
  for (const auto& [x1, x2] : pts) at_tokens.push_back(num(x1) + ":" + num(x2));
  t.canonical.insert(t.canonical.end(), {"--at", join(at_tokens)});
  if (std::holds_alternative<HawkesModel>(m)) t.canonical.insert(t.canonical.end(), {"--steps", std::to_string(cfg_.steps)});
  t.params.push_back({"K", std::to_string(K1) + "x" + std::to_string(K2)});
  t.params.push_back({"filter", f.name()});
  t.params.push_back({"alpha", f.alpha_label()});
  t.params.push_back({"range", "box:" + num(box.a1) + "," + num(box.b1) + "," + num(box.a2) + "," + num(box.b2)});
  t.params.push_back({"seed", "none"});
  t.columns = "x1,x2,value";
  for (const auto& [x1, x2] : pts) t.row({cell(x1), cell(x2), cell(filtered_cdf_2d(exp, f, x1, x2))});
  return kExitOk;
}

int Runner::cmd_bounds(Table& t) {
  check_flags({"K", "filter", "alpha", "exp-order", "grid"});
  const FilterSpec f = filter("rcos");
  if (cfg_.Ks.empty()) throw ValidationError("-K: required by the 'bounds' command");
  const std::vector<BoundSample> samples = bound_sweep(f, cfg_.Ks, cfg_.grid);
  const BoundReport report = verify_bounds(f, cfg_.Ks, cfg_.grid);

  t.canonical.insert(t.canonical.end(), {"-K", join(cfg_.Ks)});
  add_filter_tokens(t, f);
  t.canonical.insert(t.canonical.end(), {"--grid", std::to_string(cfg_.grid)});
  t.params = {{"K", join(cfg_.Ks)}, {"filter", f.name()}, {"alpha", f.alpha_label()},
              {"grid", std::to_string(cfg_.grid)}, {"range", "none"}, {"seed", "none"}};
  t.columns = "K,x,abs_K1,bound,admissible";
  for (const auto& s : samples) {
    t.row({std::to_string(s.K), cell(s.x), cell(s.abs_k1), cell(s.bound), s.admissible ? "1" : "0"});
  }
  t.footer.push_back("summary: filter=" + f.name() + " violations=" + std::to_string(report.violations.size()) +
                     " admissible=" + std::to_string(report.admissible_count) +
                     " skipped=" + std::to_string(report.skipped_count) + " max_slack=" + cell(report.max_slack));
  for (const auto& v : report.violations) {
    t.footer.push_back("violation: K=" + std::to_string(v.K) + " x=" + cell(v.x) + " abs_K1=" + cell(v.abs_k1) +
                       " bound=" + cell(v.bound));
  }
  return report.holds() ? kExitOk : kExitBoundViolation;
}

int Runner::cmd_trace(Table& t) {
  check_flags({"K", "filter", "alpha", "exp-order", "x"});
  const FilterSpec f = filter("rcos");
  if (cfg_.Ks.empty()) throw ValidationError("-K: required by the 'trace' command");
  const double x = parse_position(cfg_.x);
  if (!(x > 0.0 && x < 2.0 * std::numbers::pi)) throw ValidationError("--x: must lie in (0, 2pi)");
  const std::vector<TracePoint> trace = convergence_trace(f, x, cfg_.Ks);

  t.canonical.insert(t.canonical.end(), {"-K", join(cfg_.Ks)});
  add_filter_tokens(t, f);
  t.canonical.insert(t.canonical.end(), {"--x", num(x)});
  t.params = {{"K", join(cfg_.Ks)}, {"filter", f.name()}, {"alpha", f.alpha_label()},
              {"x", num(x)}, {"range", "none"}, {"seed", "none"}};
  t.columns = "K,abs_K1,bound,admissible";
  for (const auto& p : trace) t.row({std::to_string(p.K), cell(p.abs_k1), cell(p.bound), p.admissible ? "1" : "0"});
  try {
    const SlopeFit fit = fit_decay_slope(trace);
    t.footer.push_back("slope=" + cell(fit.slope) + " K_lo=" + std::to_string(fit.K_lo) +
                       " K_hi=" + std::to_string(fit.K_hi) + " envelope_points=" + std::to_string(fit.points));
  } catch (const DomainError&) {
    t.footer.push_back("slope=none");
  }
  return kExitOk;
}

int Runner::cmd_hawkes(Table& t) {
  check_flags({"model", "a", "b", "range", "K", "filter", "alpha", "exp-order", "steps", "dx"});
  const int K = single_K();
  const FilterSpec f = filter("srcos");
  if (!std::holds_alternative<HawkesModel>(model())) throw ValidationError("--config: expected a hawkes model");
  const CharFn1D cf = charfn();
  const Interval iv = interval(cf);
  const double dx = has("dx") ? cfg_.dx : 0.25;
  const std::vector<double> ns = default_pmf_support(iv, dx);
  const CosExpansion exp = sample_coefficients(cf, iv.a, iv.b, K);
  const FilteredCdf F(exp, f);
  const std::vector<double> masses = recover_pmf(exp, f, ns, dx);

  model_tokens(t);
  t.canonical.insert(t.canonical.end(), {"--range", range_label_, "-K", std::to_string(K)});
  add_filter_tokens(t, f);
  t.canonical.insert(t.canonical.end(), {"--steps", std::to_string(cfg_.steps), "--dx", num(dx)});
  add_expansion_params(t, std::to_string(K), f, range_label_, iv);
  t.params.push_back({"steps", std::to_string(cfg_.steps)});
  t.params.push_back({"dx", num(dx)});
  t.columns = "n,cdf,pmf";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double upper = std::min(ns[i] + 0.5, iv.b);
    t.row({num(ns[i]), cell(F(upper)), cell(masses[i])});
  }
  t.footer.push_back("mean=" + cell(cos_moment(exp, f, 1)));
  return kExitOk;
}

int Runner::cmd_gpb(Table& t) {
  check_flags({"model", "a", "b", "range", "K", "filter", "alpha", "exp-order", "at", "grid"});
  const int K = single_K();
  const FilterSpec f = filter("rcos");
  if (!std::holds_alternative<GpbSpec>(model())) throw ValidationError("--config: expected a gpb or pb model");
  const CharFn1D cf = charfn();
  const Interval iv = interval(cf);
  std::vector<double> xs = positions(false);
  if (xs.empty()) {
    if (cfg_.grid < 2) throw ValidationError("--grid: must be >= 2");
    for (int j = 0; j < cfg_.grid; ++j) xs.push_back(iv.a + (iv.b - iv.a) * j / (cfg_.grid - 1));
  }
  const FilteredCdf F(sample_coefficients(cf, iv.a, iv.b, K), f);

  model_tokens(t);
  t.canonical.insert(t.canonical.end(), {"--range", range_label_, "-K", std::to_string(K)});
  add_filter_tokens(t, f);
  if (has("at")) {
    for (auto& tok : position_tokens(xs)) t.canonical.push_back(tok);
  } else {
    t.canonical.insert(t.canonical.end(), {"--grid", std::to_string(cfg_.grid)});
  }
  add_expansion_params(t, std::to_string(K), f, range_label_, iv);
  t.columns = "x,cdf";
  for (double x : xs) {
    if (x < iv.a || x > iv.b) throw DomainError("--at: x = " + num(x) + " lies outside the truncation range");
    t.row({cell(x), cell(F(x))});
  }
  return kExitOk;
}

int Runner::cmd_oracle(Table& t) {
  check_flags({"model", "method", "at", "dx", "q", "paths", "seed", "steps", "grid-tol"});
  const Model& m = model();
  const bool mc = cfg_.method == "mc";
  const std::string what = cfg_.quantity;

  model_tokens(t);
  t.canonical.insert(t.canonical.begin() + 2, what);  // after "discos oracle"
  t.canonical.insert(t.canonical.end(), {"--method", cfg_.method});
  t.params = {{"quantity", what}, {"method", cfg_.method}, {"K", "none"}, {"filter", "none"},
              {"alpha", "none"}, {"range", "none"}};

  Sampler sampler;
  std::vector<double> samples;
  std::optional<DiscreteDist> law;
  const bool hawkes = std::holds_alternative<HawkesModel>(m);
  if (std::holds_alternative<DiscreteDist2D>(m)) throw ValidationError("--model: oracle needs a univariate model");
  if (mc) {
    if (cfg_.paths < 1) throw ValidationError("--paths: must be >= 1");
    if (const auto* d = std::get_if<DiscreteDist>(&m)) sampler = discrete_sampler(*d);
    if (const auto* g = std::get_if<GpbSpec>(&m)) sampler = gpb_sampler(*g);
    if (const auto* h = std::get_if<HawkesModel>(&m)) sampler = hawkes_count_sampler(*h);
    samples = monte_carlo_samples(sampler, cfg_.paths, cfg_.seed);
    t.canonical.insert(t.canonical.end(), {"--paths", std::to_string(cfg_.paths), "--seed", std::to_string(cfg_.seed)});
    t.params.push_back({"seed", std::to_string(cfg_.seed)});
    t.params.push_back({"paths", std::to_string(cfg_.paths)});
    t.params.push_back({"standard_error", cell(0.5 / std::sqrt(static_cast<double>(cfg_.paths)))});
  } else {
    if (has("paths") || has("seed")) throw ValidationError("--paths/--seed: only used with --method mc");
    t.params.push_back({"seed", "none"});
    if (!hawkes) {
      law = exact_law();
      if (std::holds_alternative<GpbSpec>(m)) {
        t.canonical.insert(t.canonical.end(), {"--grid-tol", num(cfg_.grid_tol)});
        t.params.push_back({"grid_tol", num(cfg_.grid_tol)});
      }
    }
  }
  auto empirical_cdf = [&](double x) {
    const auto c = std::upper_bound(samples.begin(), samples.end(), x) - samples.begin();
    return static_cast<double>(c) / static_cast<double>(samples.size());
  };

  if (what == "cdf" || what == "pmf") {
    if (!mc && hawkes) throw ValidationError("--method: hawkes models have no exact " + what + "; use --method mc");
    std::vector<double> xs = positions(what == "cdf" || !law);
    double dx = cfg_.dx;
    if (what == "pmf") {
      if (xs.empty()) xs = law->points();
      if (!has("dx")) {
        double gap = 1.0;
        for (std::size_t i = 1; i < xs.size(); ++i) gap = std::min(gap, xs[i] - xs[i - 1]);
        dx = 0.25 * gap;
      }
      if (!(dx > 0.0)) throw ValidationError("--dx: must be positive");
    }
    if (has("at")) for (auto& tok : position_tokens(xs)) t.canonical.push_back(tok);
    if (what == "pmf") {
      t.canonical.insert(t.canonical.end(), {"--dx", num(dx)});
      t.params.push_back({"dx", num(dx)});
    }
    auto F = [&](double x) { return mc ? empirical_cdf(x) : exact_cdf(*law, x); };
    t.columns = "x,value";
    for (double x : xs) t.row({cell(x), cell(what == "cdf" ? F(x) : F(x + dx) - F(x - dx))});
  } else {
    const std::vector<int> qs = cfg_.q.empty() ? std::vector<int>{1} : cfg_.q;
    t.canonical.insert(t.canonical.end(), {"-q", join(qs)});
    if (hawkes && !mc) {
      t.canonical.insert(t.canonical.end(), {"--steps", std::to_string(cfg_.steps)});
      t.params.push_back({"steps", std::to_string(cfg_.steps)});
    }
    t.columns = "q,value";
    for (int q : qs) {
      if (q < 0) throw ValidationError("-q: moment order must be >= 0, got " + std::to_string(q));
      double v;
      if (mc) {
        CompensatedSum<double> s;
        for (double x : samples) s += std::pow(x, q);
        v = s.value() / static_cast<double>(samples.size());
      } else if (hawkes) {
        if (q != 1) throw ValidationError("-q: the hawkes exact oracle covers q = 1 only");
        v = hawkes_mean_ode(std::get<HawkesModel>(m), cfg_.steps);
      } else {
        v = exact_moment(*law, q);
      }
      t.row({std::to_string(q), cell(v)});
    }
  }
  return kExitOk;
}

int Runner::cmd_convergence(Table& t) {
  check_flags({"model", "a", "b", "range", "K", "filter", "alpha", "exp-order", "at", "q", "steps", "grid-tol"});
  if (cfg_.Ks.empty()) throw ValidationError("-K: required by the 'convergence' command");
  for (int K : cfg_.Ks) {
    if (K < 1) throw ValidationError("-K: must be >= 1, got " + std::to_string(K));
  }
  if (has("q") == has("at")) throw ValidationError("--at/-q: pass exactly one (CDF points or moment orders)");
  const FilterSpec f = filter("rcos");
  const CharFn1D cf = charfn();
  const Interval iv = interval(cf);
  const Model& m = model();
  const bool hawkes = std::holds_alternative<HawkesModel>(m);

  model_tokens(t);
  t.canonical.insert(t.canonical.end(), {"--range", range_label_, "-K", join(cfg_.Ks)});
  add_filter_tokens(t, f);
  add_expansion_params(t, join(cfg_.Ks), f, range_label_, iv);
  if (hawkes) t.canonical.insert(t.canonical.end(), {"--steps", std::to_string(cfg_.steps)});
  if (std::holds_alternative<GpbSpec>(m)) {
    t.canonical.insert(t.canonical.end(), {"--grid-tol", num(cfg_.grid_tol)});
    t.params.push_back({"grid_tol", num(cfg_.grid_tol)});
  }

  if (has("at")) {
    if (hawkes) throw ValidationError("--at: hawkes models have no exact CDF; use -q 1");
    const std::vector<double> xs = positions(true);
    for (double x : xs) {
      if (x < iv.a || x > iv.b) throw DomainError("--at: x = " + num(x) + " lies outside the truncation range");
    }
    for (auto& tok : position_tokens(xs)) t.canonical.push_back(tok);
    const DiscreteDist law = exact_law();
    t.columns = "K,x,value,reference,abs_error";
    for (int K : cfg_.Ks) {
      const FilteredCdf F(sample_coefficients(cf, iv.a, iv.b, K), f);
      for (double x : xs) {
        const double v = F(x), ref = exact_cdf(law, x);
        t.row({std::to_string(K), cell(x), cell(v), cell(ref), cell(std::abs(v - ref))});
      }
    }
  } else {
    t.canonical.insert(t.canonical.end(), {"-q", join(cfg_.q)});
    std::vector<double> refs;
    for (int q : cfg_.q) {
      if (q < 0) throw ValidationError("-q: moment order must be >= 0, got " + std::to_string(q));
      if (hawkes) {
        if (q != 1) throw ValidationError("-q: the hawkes reference covers q = 1 only");
        refs.push_back(hawkes_mean_ode(std::get<HawkesModel>(m), cfg_.steps));
      } else {
        refs.push_back(exact_moment(exact_law(), q));
      }
    }
    t.columns = "K,q,value,reference,abs_error";
    for (int K : cfg_.Ks) {
      const CosExpansion exp = sample_coefficients(cf, iv.a, iv.b, K);
      for (std::size_t i = 0; i < cfg_.q.size(); ++i) {
        const double v = cos_moment(exp, f, cfg_.q[i]);
        t.row({std::to_string(K), std::to_string(cfg_.q[i]), cell(v), cell(refs[i]), cell(std::abs(v - refs[i]))});
      }
    }
  }
  return kExitOk;
}

int Runner::execute(Table& t) {
  t.canonical = {"discos", cfg_.command};
  int status = kExitOk;
  const std::string& c = cfg_.command;
  if (c == "cdf") status = cmd_cdf(t);
  else if (c == "pmf") status = cmd_pmf(t);
  else if (c == "moment") status = cmd_moment(t);
  else if (c == "cdf2d") status = cmd_cdf2d(t);
  else if (c == "bounds") status = cmd_bounds(t);
  else if (c == "trace") status = cmd_trace(t);
  else if (c == "hawkes") status = cmd_hawkes(t);
  else if (c == "gpb") status = cmd_gpb(t);
  else if (c == "oracle") status = cmd_oracle(t);
  else if (c == "convergence") status = cmd_convergence(t);
  else throw ValidationError("command: unknown '" + c + "'");
  base_params(t);
  return status;
}

struct CommandInfo {
  const char* name;
  const char* help;
};

constexpr CommandInfo kCommands[] = {
    {"cdf", "Filtered COS CDF at --at points (flags: --model --a --b --range -K --filter --alpha --exp-order --at --steps)"},
    {"pmf", "PMF masses F(x+dx) - F(x-dx) (flags: --model --a --b --range -K --filter --alpha --exp-order --at --dx --steps)"},
    {"moment", "Raw moments of the filtered expansion (flags: --model --a --b --range -K --filter --alpha --exp-order -q --steps)"},
    {"cdf2d", "Bivariate filtered CDF at x1:x2 pairs (flags: --model --box -K|--K1 --K2 --filter --alpha --exp-order --at --steps)"},
    {"bounds", "Sweep |K1| against its closed-form bound; exit 4 on violations (flags: --filter --alpha --exp-order -K --grid)"},
    {"trace", "|K1(x)| and its bound along K, with a fitted decay slope (flags: --filter --alpha --exp-order -K --x)"},
    {"hawkes", "Conditional CDF and PMF of the Hawkes count (flags: --config -K --filter --alpha --exp-order --steps --range --a --b --dx)"},
    {"gpb", "CDF of a (generalized) Poisson-binomial law (flags: --config -K --filter --alpha --exp-order --range --a --b --at --grid)"},
    {"oracle", "Exact or Monte Carlo reference values: oracle cdf|pmf|moment (flags: --model --method --at --dx -q --paths --seed --steps --grid-tol)"},
    {"convergence", "COS value, exact reference and error for each K (flags: --model --a --b --range -K --filter --alpha --exp-order --at|-q --steps --grid-tol)"},
};

}  // namespace

double parse_position(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  const auto pi_at = s.find("pi");
  if (pi_at == std::string_view::npos) return parse_real(s, "position");
  const std::string_view coef_text = s.substr(0, pi_at);
  double coef = 1.0;
  if (coef_text == "-") {
    coef = -1.0;
  } else if (coef_text == "+") {
    coef = 1.0;
  } else if (!coef_text.empty()) {
    coef = parse_real(coef_text.front() == '+' ? coef_text.substr(1) : coef_text, "position '" + std::string(text) + "'");
  }
  std::string_view rest = s.substr(pi_at + 2);
  double den = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ValidationError("position: cannot parse '" + std::string(text) + "'");
    den = parse_real(rest.substr(1), "position '" + std::string(text) + "'");
    if (den == 0.0) throw ValidationError("position: zero denominator in '" + std::string(text) + "'");
  }
  return coef * std::numbers::pi / den;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Characteristic-function inversion of discrete laws by filtered Fourier-cosine expansion"};
  app.name("discos");
  app.set_version_flag("--version", DISCOS_VERSION);
  app.require_subcommand(1, 1);
  app.footer("Environment:\n  DISCOS_THREADS  cap on worker threads (default: hardware concurrency)");
  app.option_defaults()->always_capture_default();

  RunConfig cfg;
  std::map<std::string, CLI::Option*> opts;
  opts["model"] = app.add_option("--model,--charfn,--config", cfg.model_path, "Model JSON file");
  opts["a"] = app.add_option("--a", cfg.a, "Lower truncation bound (accepts 0.6pi-style literals)");
  opts["b"] = app.add_option("--b", cfg.b, "Upper truncation bound");
  opts["range"] = app.add_option("--range", cfg.range, "Truncation rule: explicit:a,b | chebyshev:tol | hawkes");
  opts["box"] = app.add_option("--box", cfg.box, "Bivariate rectangle a1,b1,a2,b2 (default [0,pi]^2)");
  opts["K"] = app.add_option("-K", cfg.Ks, "Number of cosine terms; comma list where a sweep is run")->delimiter(',');
  opts["K1"] = app.add_option("--K1", cfg.K1, "Terms in the first dimension (cdf2d)");
  opts["K2"] = app.add_option("--K2", cfg.K2, "Terms in the second dimension (cdf2d)");
  opts["filter"] = app.add_option("--filter", cfg.filter, "Spectral filter: lanczos|rcos|srcos|exp|none")
                       ->check(CLI::IsMember({"lanczos", "rcos", "srcos", "exp", "none"}));
  opts["alpha"] = app.add_option("--alpha", cfg.alpha, "Exponential filter scale: <float>|eps|k2");
  opts["exp-order"] = app.add_option("--exp-order", cfg.exp_order, "Exponential filter order (even, >= 2)");
  opts["at"] = app.add_option("--at", cfg.at, "Evaluation points, comma separated (x1:x2 pairs for cdf2d)")->delimiter(',');
  opts["dx"] = app.add_option("--dx", cfg.dx, "PMF half-width around each support point");
  opts["q"] = app.add_option("-q", cfg.q, "Moment orders, comma separated")->delimiter(',');
  opts["steps"] = app.add_option("--steps", cfg.steps, "RK4 steps for the Hawkes transform ODEs");
  opts["grid"] = app.add_option("--grid", cfg.grid, "Grid size (interior points for bounds, CDF points for gpb)");
  opts["x"] = app.add_option("--x", cfg.x, "Kernel evaluation point for trace");
  opts["paths"] = app.add_option("--paths", cfg.paths, "Monte Carlo paths");
  opts["seed"] = app.add_option("--seed", cfg.seed, "Monte Carlo seed (Philox4x32-10 key)");
  opts["method"] = app.add_option("--method", cfg.method, "Oracle method: exact|mc")
                       ->check(CLI::IsMember({"exact", "mc"}));
  opts["grid-tol"] = app.add_option("--grid-tol", cfg.grid_tol, "Atom merge tolerance of the GPB convolution oracle");
  opts["output"] = app.add_option("-o,--output", cfg.output, "Write CSV to this file instead of stdout");

  std::map<std::string, CLI::App*> subs;
  for (const auto& info : kCommands) {
    CLI::App* sub = app.add_subcommand(info.name, info.help);
    sub->fallthrough();
    subs[info.name] = sub;
  }
  subs["oracle"]->add_option("quantity", cfg.quantity, "cdf|pmf|moment")
      ->required()
      ->check(CLI::IsMember({"cdf", "pmf", "moment"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "discos: error: " << e.what() << '\n';
    return kExitValidation;
  }

  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) cfg.command = name;
  }
  std::set<std::string> given;
  for (const auto& [key, opt] : opts) {
    if (opt->count() > 0) given.insert(key);
  }

  try {
    Table table;
    Runner runner(cfg, given);
    const int status = runner.execute(table);
    const std::string text = table.render();
    if (!cfg.output.empty()) {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw ValidationError("--output: cannot write '" + cfg.output + "'");
      file << text;
      if (!file) throw ValidationError("--output: write to '" + cfg.output + "' failed");
    } else {
      out << text;
    }
    if (status == kExitBoundViolation) err << "discos: bound violations found\n";
    return status;
  } catch (const ValidationError& e) {
    err << "discos: error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericError& e) {
    err << "discos: numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace discos::cli
