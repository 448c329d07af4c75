#include "xiprime/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "xiprime/error.hpp"
#include "xiprime/parallel.hpp"
#include "xiprime/special.hpp"

namespace xiprime::verify {

namespace {

constexpr double pi = std::numbers::pi;

Error coverage_error(const std::string& msg) { return Error(ErrorKind::config, "coverage", msg); }
Error table_extent_error(const std::string& msg) {
  return Error(ErrorKind::numeric, "table_extent", msg);
}
Error quadrature_error(const std::string& msg) {
  return Error(ErrorKind::numeric, "quadrature", msg);
}
Error budget_error(const std::string& msg) { return Error(ErrorKind::numeric, "budget", msg); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void check_hypotheses(double x, double sigma, const char* where) {
  if (!(x >= 1.0) || !std::isfinite(x)) {
    throw precondition_error(std::string(where) + ": x must be >= 1");
  }
  if (!(sigma > 1.25 && sigma < 2.0)) {
    throw precondition_error(std::string(where) + ": sigma must lie in (5/4, 2)");
  }
}

void check_K(const arith::ArithTable& table, int K, const char* where) {
  if (K < 0 || K > table.j_max()) {
    throw precondition_error(std::string(where) + ": K outside [0, j_max]");
  }
}

std::uint64_t head_limit(const arith::ArithTable& table, double x, const char* where) {
  const auto n = static_cast<std::uint64_t>(std::floor(x));
  if (n > table.n_max()) {
    throw table_extent_error(std::string(where) + ": table ends at " +
                             std::to_string(table.n_max()) + " below x = " + fmt(x));
  }
  return n;
}

// sum_{n <= x} a_K(n, w) (x/n)^w
cplx head_sum(const arith::ArithTable& table, int K, double x, cplx w, std::uint64_t n_hi) {
  const cplx Lw = special::L_func(w);
  const double lx = std::log(x);
  CompensatedSum<cplx> acc;
  for (std::uint64_t n = 2; n <= n_hi; ++n) {
    const cplx a = arith::a_coefficient(table, K, n, Lw);
    if (a == cplx(0.0, 0.0)) continue;
    acc.add(a * std::exp(w * (lx - std::log(static_cast<double>(n)))));
  }
  return acc.value();
}

struct TailValue {
  cplx value;
  std::string note;
};

// sum_{n > x} a_K(n, s) (x/n)^s
TailValue tail_sum(const arith::ArithTable& table, int K, double x, cplx s, std::uint64_t n_hi,
                   TailMode mode) {
  if (mode == TailMode::analytic) {
    const cplx full = std::exp(s * std::log(x)) * dirichlet_series(s, K);
    return {full - head_sum(table, K, x, s, n_hi),
            "n > x tail from the closed-form series minus the head"};
  }
  const cplx Ls = special::L_func(s);
  const double lx = std::log(x);
  CompensatedSum<cplx> acc;
  int quiet = 0;
  for (std::uint64_t n = n_hi + 1; n <= table.n_max(); ++n) {
    const cplx term =
        arith::a_coefficient(table, K, n, Ls) * std::exp(s * (lx - std::log(double(n))));
    acc.add(term);
    const double scale = std::abs(acc.value());
    if (std::abs(term) < 1.0e-14 * scale) {
      if (++quiet >= 50) {
        return {acc.value(), "n > x tail summed directly to n = " + std::to_string(n)};
      }
    } else {
      quiet = 0;
    }
  }
  throw table_extent_error("ef_rhs: direct tail not converged by n = " +
                           std::to_string(table.n_max()));
}

template <class F>
auto integrate_panels(F f, double T, const QuadratureOptions& opts, double* est_error) {
  using R = decltype(f(0.0));
  const auto n_panels = static_cast<std::size_t>(std::max(1.0, std::ceil(T / opts.panel)));
  const double h = T / double(n_panels);
  std::vector<R> values(n_panels);
  std::vector<double> errors(n_panels);
  std::atomic<std::size_t> evaluations{0};
  auto counted = [&](double t) {
    if (evaluations.fetch_add(1) >= opts.max_evaluations) {
      throw budget_error("quadrature: more than " + std::to_string(opts.max_evaluations) +
                         " integrand evaluations");
    }
    return f(t);
  };
  parallel_blocks(n_panels, [&](std::size_t b) {
    const double a = h * double(b);
    const double c = b + 1 == n_panels ? T : h * double(b + 1);
    double err = 0.0;
    values[b] = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        counted, a, c, opts.max_depth, opts.rel_tol, &err);
    errors[b] = err;
  });
  CompensatedSum<R> total;
  double err = 0.0;
  for (std::size_t b = 0; b < n_panels; ++b) {
    total.add(values[b]);
    err += errors[b];
  }
  *est_error = err;
  const R v = total.value();
  if (!std::isfinite(std::abs(v))) throw quadrature_error("quadrature: non-finite result");
  if (err > 1.0e-6 * T) {
    throw quadrature_error("quadrature: estimated error " + fmt(err) + " above 1e-6 T");
  }
  return v;
}

}  // namespace

cplx dirichlet_series(cplx s, int K) {
  const special::ZetaJet z = special::zeta_jet(s);
  const cplx r = z.d1 / z.value;
  const cplx rp = z.d2 / z.value - r * r;
  const cplx inv = 1.0 / special::L_func(s);
  cplx acc = r;
  cplx pw = 1.0;
  cplx inv_k = 1.0;
  for (int k = 1; k <= K; ++k) {
    inv_k *= inv;
    acc += pw * rp * inv_k;
    pw *= -r;
  }
  return acc;
}

cplx xi_second_over_first(cplx s) {
  const special::ZetaJet z = special::zeta_jet(s);
  const cplx r = z.d1 / z.value;
  const cplx rp = z.d2 / z.value - r * r;
  const cplx first = special::L_func(s) + r;
  return first + (special::L_prime(s) + rp) / first;
}

double error_budget(double x, double t, double sigma, int K, double eps) {
  const double tau = std::abs(t) + 2.0;
  const double lx = std::log(x);
  const double growth = std::max(std::pow(x, eps), std::pow(lx, 2 * K + 2));
  return std::pow(x, 0.5 - sigma) + std::sqrt(x) / tau * growth;
}

LhsValue ef_lhs(double x, double t, double sigma, const zeros::ZeroSet& zs, double window) {
  if (!(window >= kMinWindow)) throw precondition_error("ef_lhs: window must be >= 500");
  if (!(x >= 1.0)) throw precondition_error("ef_lhs: x must be >= 1");
  if (!(sigma > 0.5)) throw precondition_error("ef_lhs: sigma must exceed 1/2");
  const bool symmetric = zs.kind != zeros::Kind::imported;
  const bool zero_at_origin =
      zs.kind == zeros::Kind::xi_prime || zs.kind == zeros::Kind::z_prime;
  const double lo = t - window;
  const double hi = t + window;
  if (std::max(std::abs(lo), std::abs(hi)) > zs.t_max || (!symmetric && (lo < 0.0))) {
    throw coverage_error("ef_lhs: zeros cover (0, " + fmt(zs.t_max) + "], need [" + fmt(lo) +
                         ", " + fmt(hi) + "]");
  }

  const double lx = std::log(x);
  const double a2 = (sigma - 0.5) * (sigma - 0.5);
  LhsValue out;
  CompensatedSum<cplx> acc;
  auto add = [&](double g) {
    const double d = t - g;
    acc.add(std::polar(1.0 / (a2 + d * d), g * lx));
    ++out.terms;
  };
  const auto& g = zs.ordinates;
  if (symmetric) {
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
      if (-*it >= lo && -*it <= hi) add(-*it);
    }
    if (zero_at_origin && lo <= 0.0 && hi >= 0.0) add(0.0);
  }
  for (const double v : g) {
    if (v >= lo && v <= hi) add(v);
  }
  out.value = (2.0 * sigma - 1.0) * acc.value();

  const double density = (std::log((std::abs(t) + window) / (2.0 * pi)) + 1.0) / (2.0 * pi);
  out.tail_bound = 1.25 * (2.0 * sigma - 1.0) * density * 2.0 / window;
  out.note = "zeros within " + fmt(window) + " of t: " + std::to_string(out.terms) +
             "; dropped zeros contribute at most " + fmt(out.tail_bound);
  return out;
}

RhsValue ef_rhs(double x, double t, double sigma, int K, const arith::ArithTable& table,
                TailMode mode) {
  check_hypotheses(x, sigma, "ef_rhs");
  check_K(table, K, "ef_rhs");
  const std::uint64_t n_hi = head_limit(table, x, "ef_rhs");
  const cplx s(sigma, t);
  const cplx w(1.0 - sigma, t);  // 1 - conj(s)
  const double lx = std::log(x);
  const cplx head = head_sum(table, K, x, w, n_hi);
  TailValue tail = tail_sum(table, K, x, s, n_hi, mode);
  const double tau = std::abs(t) + 2.0;
  const cplx log_term = std::exp(cplx(0.5 - sigma, t) * lx) * std::log(tau / (2.0 * pi));
  return {(head + tail.value) / std::sqrt(x) + log_term, std::move(tail.note)};
}

ExplicitFormulaReport ef_report(const std::vector<SampleSpec>& specs, const zeros::ZeroSet& xip,
                                const arith::ArithTable& table, double window, TailMode mode) {
  if (!(window >= kMinWindow)) throw precondition_error("ef_report: window must be >= 500");
  for (const auto& sp : specs) {
    check_hypotheses(sp.x, sp.sigma, "ef_report");
    check_K(table, sp.K, "ef_report");
  }
  ExplicitFormulaReport rep;
  rep.window = window;
  rep.samples.resize(specs.size());
  parallel_blocks(specs.size(), [&](std::size_t i) {
    const SampleSpec& sp = specs[i];
    Sample& out = rep.samples[i];
    out.x = sp.x;
    out.t = sp.t;
    out.sigma = sp.sigma;
    out.K = sp.K;
    const LhsValue lhs = ef_lhs(sp.x, sp.t, sp.sigma, xip, window);
    const RhsValue rhs = ef_rhs(sp.x, sp.t, sp.sigma, sp.K, table, mode);
    out.lhs = lhs.value;
    out.rhs = rhs.value;
    out.tail_bound = lhs.tail_bound;
    out.residual = std::abs(lhs.value - rhs.value);
    const double scale = std::max(std::abs(lhs.value), std::abs(rhs.value));
    out.rel_residual = scale > 0.0 ? out.residual / scale : 0.0;
    out.budget = error_budget(sp.x, sp.t, sp.sigma, sp.K);
    out.within_budget = out.residual <= kBudgetMultiplier * out.budget;
    out.truncation_note = lhs.note + "; " + rhs.note;
  });
  return rep;
}

MeanValueResult mean_value_integral(double x, int k, int l, double sigma, double T,
                                    const QuadratureOptions& opts) {
  if (!(x > 0.0)) throw precondition_error("mean_value_integral: x must be positive");
  if (k < 0 || l < 0 || k > 8 || l > 8) {
    throw precondition_error("mean_value_integral: k and l must lie in [0, 8]");
  }
  if (sigma != -0.5 && sigma != 1.5) {
    throw precondition_error("mean_value_integral: sigma must be -1/2 or 3/2");
  }
  if (!(T > 2.0 * pi) || T > 1.0e5) {
    throw precondition_error("mean_value_integral: T must lie in (2 pi, 1e5]");
  }
  const double lx = std::log(x);
  auto f = [=](double t) {
    const cplx L = special::L_func(cplx(sigma, t));
    const cplx den = std::pow(std::conj(L), k) * std::pow(L, l);
    return std::polar(1.0, t * lx) / den;
  };
  MeanValueResult r;
  r.numeric = integrate_panels(f, T, opts, &r.est_error);
  const double ell = 0.5 * std::log(T / (2.0 * pi));
  r.predicted = x == 1.0 ? T * std::pow(ell, -(k + l)) : 0.0;
  r.ratio = x == 1.0 ? std::abs(r.numeric / r.predicted) : std::nan("");
  r.constant = x == 1.0 ? std::nan("") : std::abs(r.numeric) * std::abs(lx);
  return r;
}

cplx R1(double x, double t, int K, const arith::ArithTable& table) {
  check_K(table, K, "R1");
  const std::uint64_t n_hi = head_limit(table, x, "R1");
  const cplx s(1.5, t);
  const cplx w(-0.5, t);
  const cplx head = head_sum(table, K, x, w, n_hi);
  const TailValue tail = tail_sum(table, K, x, s, n_hi, TailMode::analytic);
  return (head + tail.value) / std::sqrt(x);
}

double r1_predicted(double x, double T, int K, const arith::ArithTable& table) {
  check_K(table, K, "r1_predicted");
  const std::uint64_t n_hi = head_limit(table, x, "r1_predicted");
  if (table.n_max() < 100 * std::max<std::uint64_t>(n_hi, 1)) {
    throw table_extent_error("r1_predicted: table must extend to 100 x");
  }
  const double inv = 1.0 / (0.5 * std::log(T / (2.0 * pi)));
  auto coef = [&](std::uint64_t n) {
    double acc = table.alpha(K, n);
    for (int k = K - 1; k >= 0; --k) acc = acc * inv + table.alpha(k, n);
    return acc;
  };
  CompensatedSum<double> below, above;
  for (std::uint64_t n = 2; n <= n_hi; ++n) {
    const double c = coef(n);
    below.add(double(n) * c * c);
  }
  for (std::uint64_t n = n_hi + 1; n <= table.n_max(); ++n) {
    const double c = coef(n);
    const double dn = double(n);
    above.add(c * c / (dn * dn * dn));
  }
  return T * (below.value() / (x * x) + x * x * above.value());
}

MomentResult r1_moment_check(double x, double T, int K, const arith::ArithTable& table,
                             const QuadratureOptions& opts) {
  if (!(T > 2.0 * pi)) throw precondition_error("r1_moment_check: T must exceed 2 pi");
  if (!(x > std::pow(std::log(T), 1.5)) || x > std::pow(T, 0.9)) {
    throw precondition_error("r1_moment_check: x must lie in ((log T)^{3/2}, T^{0.9}]");
  }
  MomentResult r;
  r.predicted = r1_predicted(x, T, K, table);
  r.numeric = integrate_panels([&](double t) { return std::norm(R1(x, t, K, table)); }, T, opts,
                               &r.est_error);
  r.ratio = r.numeric / r.predicted;
  return r;
}

}  // namespace xiprime::verify
