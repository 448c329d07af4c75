#pragma once

#include <complex>

namespace xiprime::special {

using cplx = std::complex<double>;

// Largest |t| served by the critical-line evaluators.
inline constexpr double kMaxT = 1.0e6;
// Largest |t| for which unscaled Xi values are representable.
inline constexpr double kUnscaledMaxT = 50.0;
// Below this height Z is evaluated from zeta by Euler-Maclaurin summation,
// above it by the Riemann-Siegel formula.
inline constexpr double kRiemannSiegelFrom = 200.0;

// Gamma-family functions for complex arguments, Stirling series after an
// upward shift. log_gamma follows the branch continuous from the positive
// real axis (the one that makes theta(t) continuous).
cplx log_gamma(cplx z);
cplx digamma(cplx z);
cplx trigamma(cplx z);

// L(s) = 1/s + 1/(s-1) - log(pi)/2 + digamma(s/2)/2, the archimedean part of
// xi'/xi, and its derivative. Poles at s = 1 and s = -2, -4, ...
cplx L_func(cplx s);
cplx L_prime(cplx s);

struct ZetaJet {
  cplx value;
  cplx d1;
  cplx d2;
};
// zeta(s) and its first two s-derivatives by Euler-Maclaurin summation.
// Intended for |Im s| up to a few thousand and Re s >= -1.
ZetaJet zeta_jet(cplx s);
inline cplx zeta(cplx s) { return zeta_jet(s).value; }

// Riemann-Siegel theta and its derivative.
double theta(double t);
double theta_prime(double t);

// Hardy's function Z(t) = exp(i theta(t)) zeta(1/2 + it) and its derivative.
double Z(double t);
double Z_prime(double t);

struct ZValue {
  double z;
  double dz;
  double est_abs_error;
};
ZValue Z_with_derivative(double t);

// Xi(t) = xi(1/2 + it) factors as E(t) * (-Z(t)) with the positive envelope
// E(t) = (t^2 + 1/4)/2 * pi^(-1/4) |Gamma(1/4 + it/2)|.
double log_envelope(double t);
// E'(t) / E(t).
double envelope_log_derivative(double t);

struct EvalPoint {
  double t;
  double value;
  bool scaled;  // value divided by E(t)
  double est_abs_error;
};

EvalPoint Xi(double t, bool scaled);
// Analytic derivative from the product rule on E * (-Z).
EvalPoint Xi_prime(double t, bool scaled);
// Five-point central difference of the scaled Xi (step h) combined with the
// analytic E'/E; the fallback path for the derivative.
EvalPoint Xi_prime_fd(double t, bool scaled, double h = 1.0e-4);

}  // namespace xiprime::special
