#include "xiprime/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rs_coefficients.hpp"
#include "xiprime/error.hpp"

namespace xiprime::special {

namespace {

using std::numbers::pi;

// B_{2k} for k = 1..12.
constexpr std::array<double, 12> kBernoulli = {
    1.0 / 6.0,          -1.0 / 30.0,         1.0 / 42.0,
    -1.0 / 30.0,        5.0 / 66.0,          -691.0 / 2730.0,
    7.0 / 6.0,          -3617.0 / 510.0,     43867.0 / 798.0,
    -174611.0 / 330.0,  854513.0 / 138.0,    -236364091.0 / 2730.0,
};

constexpr int kStirlingTerms = 8;
constexpr double kStirlingMinAbs = 12.0;

// Shifts z upward by whole steps until the Stirling series is accurate.
int stirling_shift(cplx z) {
  int m = 0;
  while (std::abs(z + static_cast<double>(m)) < kStirlingMinAbs || z.real() + m < 0.5) ++m;
  return m;
}

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) throw domain_error("log_gamma: pole");
  const int m = stirling_shift(z);
  cplx shift_sum = 0.0;
  for (int j = 0; j < m; ++j) shift_sum += std::log(z + static_cast<double>(j));
  const cplx w = z + static_cast<double>(m);
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx pw = inv;
  for (int k = 1; k <= kStirlingTerms; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * pw;
    pw *= inv2;
  }
  const cplx lg = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * pi) + series;
  return lg - shift_sum;
}

cplx digamma(cplx z) {
  if (is_nonpositive_integer(z)) throw domain_error("digamma: pole");
  const int m = stirling_shift(z);
  cplx shift_sum = 0.0;
  for (int j = 0; j < m; ++j) shift_sum += 1.0 / (z + static_cast<double>(j));
  const cplx w = z + static_cast<double>(m);
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx pw = inv2;
  for (int k = 1; k <= kStirlingTerms; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k) * pw;
    pw *= inv2;
  }
  return std::log(w) - 0.5 * inv - series - shift_sum;
}

cplx trigamma(cplx z) {
  if (is_nonpositive_integer(z)) throw domain_error("trigamma: pole");
  const int m = stirling_shift(z);
  cplx shift_sum = 0.0;
  for (int j = 0; j < m; ++j) {
    const cplx d = z + static_cast<double>(j);
    shift_sum += 1.0 / (d * d);
  }
  const cplx w = z + static_cast<double>(m);
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx pw = inv2 * inv;
  for (int k = 1; k <= kStirlingTerms; ++k) {
    series += kBernoulli[k - 1] * pw;
    pw *= inv2;
  }
  return inv + 0.5 * inv2 + series + shift_sum;
}

namespace {

void check_L_pole(cplx s) {
  if (s.imag() != 0.0) return;
  const double x = s.real();
  if (x == 1.0 || (x <= 0.0 && std::fmod(x, 2.0) == 0.0)) {
    throw domain_error("L(s): pole at s = " + std::to_string(x));
  }
}

}  // namespace

cplx L_func(cplx s) {
  check_L_pole(s);
  return 1.0 / s + 1.0 / (s - 1.0) - 0.5 * std::log(pi) + 0.5 * digamma(0.5 * s);
}

cplx L_prime(cplx s) {
  check_L_pole(s);
  return -1.0 / (s * s) - 1.0 / ((s - 1.0) * (s - 1.0)) + 0.25 * trigamma(0.5 * s);
}

namespace {

// Second-order jet in s: value and first two derivatives.
struct Jet {
  cplx v, d, dd;
};

Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
Jet operator*(cplx c, const Jet& a) { return {c * a.v, c * a.d, c * a.dd}; }

// n^{-s} as a jet.
Jet power_jet(double log_n, cplx s) {
  const cplx v = std::exp(-s * log_n);
  return {v, -log_n * v, log_n * log_n * v};
}

constexpr int kEulerMaclaurinTerms = 12;

}  // namespace

ZetaJet zeta_jet(cplx s) {
  if (s == cplx(1.0, 0.0)) throw domain_error("zeta: pole at s = 1");
  // Term ratio of the correction series is about (|s + 2k| / (2 pi N))^2.
  const int N = static_cast<int>(std::ceil((std::abs(s) + 2.0 * kEulerMaclaurinTerms) / 2.0)) + 10;
  Jet sum{0.0, 0.0, 0.0};
  for (int n = 1; n < N; ++n) sum = sum + power_jet(std::log(static_cast<double>(n)), s);

  const double log_N = std::log(static_cast<double>(N));
  const Jet n_pow = power_jet(log_N, s);  // N^{-s}
  const cplx r = 1.0 / (s - 1.0);
  const Jet inv_sm1{r, -r * r, 2.0 * r * r * r};
  sum = sum + static_cast<double>(N) * (n_pow * inv_sm1);
  sum = sum + cplx(0.5) * n_pow;

  // B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
  Jet rising{s, 1.0, 0.0};
  double fact = 2.0;  // (2k)!
  double n_scale = 1.0 / N;
  for (int k = 1; k <= kEulerMaclaurinTerms; ++k) {
    const cplx coef = kBernoulli[k - 1] / fact * n_scale;
    sum = sum + coef * (rising * n_pow);
    const double a = 2.0 * k - 1.0;
    rising = rising * Jet{s + a, 1.0, 0.0} * Jet{s + a + 1.0, 1.0, 0.0};
    fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    n_scale /= static_cast<double>(N) * N;
  }
  return {sum.v, sum.d, sum.dd};
}

double theta(double t) {
  const double at = std::abs(t);
  double th;
  if (at >= 10.0) {
    const double i1 = 1.0 / at;
    const double i2 = i1 * i1;
    th = 0.5 * at * std::log(at / (2.0 * pi)) - 0.5 * at - pi / 8.0 +
         i1 * (1.0 / 48.0 + i2 * (7.0 / 5760.0 + i2 * (31.0 / 80640.0 + i2 * (127.0 / 430080.0))));
  } else {
    th = log_gamma(cplx(0.25, 0.5 * at)).imag() - 0.5 * at * std::log(pi);
  }
  return t < 0 ? -th : th;
}

double theta_prime(double t) {
  const double at = std::abs(t);
  if (at >= 10.0) {
    const double i2 = 1.0 / (at * at);
    return 0.5 * std::log(at / (2.0 * pi)) -
           i2 * (1.0 / 48.0 + i2 * (7.0 / 1920.0 + i2 * (31.0 / 16128.0 + i2 * (127.0 / 61440.0))));
  }
  return 0.5 * digamma(cplx(0.25, 0.5 * at)).real() - 0.5 * std::log(pi);
}

namespace {

template <std::size_t M>
double horner(const std::array<double, M>& c, double u) {
  double r = 0.0;
  for (std::size_t i = M; i-- > 0;) r = r * u + c[i];
  return r;
}

template <std::size_t M>
double horner_derivative(const std::array<double, M>& c, double u) {
  double r = 0.0;
  for (std::size_t i = M; i-- > 1;) r = r * u + static_cast<double>(i) * c[i];
  return r;
}

double z_error_estimate(double t) {
  if (t < kRiemannSiegelFrom) return 1.0e-11;
  return 1.0e-4 * std::pow(2.0 * pi / t, 1.75) + 1.0e-13 * std::pow(t / (2.0 * pi), 0.25);
}

ZValue riemann_siegel(double t, bool with_derivative) {
  const double a = std::sqrt(t / (2.0 * pi));
  const auto N = static_cast<long>(a);
  const double p = a - static_cast<double>(N);
  const double th = theta(t);
  double z = 0.0;
  double dz = 0.0;
  if (with_derivative) {
    const double dth = theta_prime(t);
    for (long n = 1; n <= N; ++n) {
      const double ln = std::log(static_cast<double>(n));
      const double amp = 1.0 / std::sqrt(static_cast<double>(n));
      const double arg = th - t * ln;
      z += amp * std::cos(arg);
      dz -= amp * std::sin(arg) * (dth - ln);
    }
  } else {
    for (long n = 1; n <= N; ++n) {
      const double ln = std::log(static_cast<double>(n));
      z += std::cos(th - t * ln) / std::sqrt(static_cast<double>(n));
    }
  }
  z *= 2.0;
  dz *= 2.0;

  // Remainder (-1)^(N-1) sum_k C_k(p) w^(k + 1/2), w = sqrt(2 pi / t).
  const double u = p - 0.5;
  const double w = std::sqrt(2.0 * pi / t);
  const double dp = 1.0 / (4.0 * pi * a);
  const std::array<double, 4> c = {horner(detail::kRsC0, u), horner(detail::kRsC1, u),
                                   horner(detail::kRsC2, u), horner(detail::kRsC3, u)};
  const std::array<double, 4> dc = {
      horner_derivative(detail::kRsC0, u), horner_derivative(detail::kRsC1, u),
      horner_derivative(detail::kRsC2, u), horner_derivative(detail::kRsC3, u)};
  double rem = 0.0;
  double drem = 0.0;
  double wk = std::sqrt(w);
  for (int k = 0; k < 4; ++k) {
    rem += c[k] * wk;
    drem += dc[k] * dp * wk - c[k] * (k + 0.5) * wk / (2.0 * t);
    wk *= w;
  }
  const double sign = (N - 1) % 2 == 0 ? 1.0 : -1.0;
  z += sign * rem;
  dz += sign * drem;
  return {z, dz, z_error_estimate(t)};
}

ZValue euler_maclaurin_z(double t) {
  const ZetaJet zj = zeta_jet(cplx(0.5, t));
  const double th = theta(t);
  const cplx rot = std::polar(1.0, th);
  const cplx i(0.0, 1.0);
  const cplx zc = rot * zj.value;
  // d/dt [e^{i theta} zeta(1/2 + it)] = e^{i theta} (i theta' zeta + i zeta').
  const cplx dzc = rot * (i * theta_prime(t) * zj.value + i * zj.d1);
  return {zc.real(), dzc.real(), z_error_estimate(t)};
}

void check_t(double t) {
  if (!std::isfinite(t) || std::abs(t) > kMaxT) {
    throw accuracy_error("t = " + std::to_string(t) + " outside validated range |t| <= 1e6");
  }
}

}  // namespace

ZValue Z_with_derivative(double t) {
  check_t(t);
  const double at = std::abs(t);
  ZValue v = at < kRiemannSiegelFrom ? euler_maclaurin_z(at) : riemann_siegel(at, true);
  if (t < 0) v.dz = -v.dz;  // Z is even
  return v;
}

double Z(double t) {
  check_t(t);
  const double at = std::abs(t);
  return at < kRiemannSiegelFrom ? euler_maclaurin_z(at).z : riemann_siegel(at, false).z;
}
double Z_prime(double t) { return Z_with_derivative(t).dz; }

double log_envelope(double t) {
  return std::log(0.5 * (t * t + 0.25)) - 0.25 * std::log(pi) +
         log_gamma(cplx(0.25, 0.5 * t)).real();
}

double envelope_log_derivative(double t) {
  return 2.0 * t / (t * t + 0.25) - 0.5 * digamma(cplx(0.25, 0.5 * t)).imag();
}

namespace {

EvalPoint unscale(EvalPoint p) {
  if (std::abs(p.t) > kUnscaledMaxT) {
    throw range_error("unscaled Xi requested at |t| = " + std::to_string(std::abs(p.t)) +
                      " > 50; use the scaled variant");
  }
  const double e = std::exp(log_envelope(p.t));
  return {p.t, p.value * e, false, p.est_abs_error * e};
}

}  // namespace

EvalPoint Xi(double t, bool scaled) {
  EvalPoint p{t, -Z(t), true, z_error_estimate(std::abs(t))};
  return scaled ? p : unscale(p);
}

EvalPoint Xi_prime(double t, bool scaled) {
  const ZValue z = Z_with_derivative(t);
  const double g = envelope_log_derivative(t);
  EvalPoint p{t, -(z.dz + g * z.z), true, z.est_abs_error * (std::abs(g) + std::log(2.0 + std::abs(t)))};
  return scaled ? p : unscale(p);
}

EvalPoint Xi_prime_fd(double t, bool scaled, double h) {
  const double f_m2 = -Z(t - 2.0 * h);
  const double f_m1 = -Z(t - h);
  const double f_p1 = -Z(t + h);
  const double f_p2 = -Z(t + 2.0 * h);
  const ZValue z = Z_with_derivative(t);
  const double dscaled = (f_m2 - 8.0 * f_m1 + 8.0 * f_p1 - f_p2) / (12.0 * h);
  const double g = envelope_log_derivative(t);
  // Rounding of the difference quotient dominates at this step size.
  const double err = 3.0 * z.est_abs_error / h + 1.0e-15 * std::log(2.0 + std::abs(t)) / h;
  EvalPoint p{t, dscaled + g * (-z.z), true, err};
  return scaled ? p : unscale(p);
}

}  // namespace xiprime::special
