#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "xiprime/arith.hpp"
#include "xiprime/zeros.hpp"

namespace xiprime::verify {

using cplx = std::complex<double>;

inline constexpr double kMinWindow = 500.0;
inline constexpr double kBudgetEpsilon = 0.1;
inline constexpr double kBudgetMultiplier = 3.0;

struct LhsValue {
  cplx value;
  double tail_bound = 0.0;  // bound on the dropped terms with |gamma - t| > window
  std::size_t terms = 0;
  std::string note;
};

// (2 sigma - 1) sum_{|gamma - t| <= window} x^{i gamma} / ((sigma - 1/2)^2 + (t - gamma)^2).
// Sets of kind xi, xi_prime and z_prime are extended to negative ordinates by
// symmetry (with the zero at 0 for the two derivative kinds); imported sets
// are used as given.
LhsValue ef_lhs(double x, double t, double sigma, const zeros::ZeroSet& zs,
                double window = kMinWindow);

enum class TailMode {
  analytic,  // sum_{n > x} from the closed form of the full series minus the head
  direct,    // term by term from the table until the cutoff rule is met
};

struct RhsValue {
  cplx value;
  std::string note;
};

// x^{-1/2} (sum_{n <= x} a_K(n, 1 - conj s) (x/n)^{1 - conj s}
//           + sum_{n > x} a_K(n, s) (x/n)^s) + x^{1/2 - conj s} log(tau / 2 pi),
// s = sigma + it, tau = |t| + 2.
RhsValue ef_rhs(double x, double t, double sigma, int K, const arith::ArithTable& table,
                TailMode mode = TailMode::analytic);

// sum_n a_K(n, s) n^{-s} = zeta'/zeta + sum_{k=1}^K (-zeta'/zeta)^{k-1} (zeta'/zeta)' / L(s)^k.
cplx dirichlet_series(cplx s, int K);
// xi''/xi' from zeta and the gamma factor.
cplx xi_second_over_first(cplx s);

// x^{1/2 - sigma} + x^{1/2} tau^{-1} max(x^eps, log^{2K+2} x).
double error_budget(double x, double t, double sigma, int K, double eps = kBudgetEpsilon);

struct SampleSpec {
  double x = 1.0;
  double t = 50.0;
  double sigma = 1.5;
  int K = 5;
};

struct Sample {
  double x = 0.0;
  double t = 0.0;
  double sigma = 0.0;
  int K = 0;
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
  double rel_residual = 0.0;
  double tail_bound = 0.0;
  double budget = 0.0;
  bool within_budget = false;  // residual <= kBudgetMultiplier * budget
  std::string truncation_note;
};

struct ExplicitFormulaReport {
  std::vector<Sample> samples;
  double window = kMinWindow;
};

ExplicitFormulaReport ef_report(const std::vector<SampleSpec>& samples, const zeros::ZeroSet& xip,
                                const arith::ArithTable& table, double window = kMinWindow,
                                TailMode mode = TailMode::analytic);

struct QuadratureOptions {
  double panel = 2.0;
  double rel_tol = 1.0e-10;
  unsigned max_depth = 12;
  std::size_t max_evaluations = 20'000'000;
};

struct MeanValueResult {
  cplx numeric;
  cplx predicted;
  double est_error = 0.0;
  double ratio = 0.0;     // |numeric / predicted| at x = 1, else NaN
  double constant = 0.0;  // |numeric| |log x| for x != 1, else NaN
};

// int_0^T x^{it} / (conj(L(s))^k L(s)^l) dt along s = sigma + it, sigma in {-1/2, 3/2}.
MeanValueResult mean_value_integral(double x, int k, int l, double sigma, double T,
                                    const QuadratureOptions& opts = {});

struct MomentResult {
  double numeric = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;
  double est_error = 0.0;
};

// R_1(x, t) = x^{-1/2} (sum_{n <= x} a_K(n, -1/2 + it) (x/n)^{-1/2 + it}
//                       + sum_{n > x} a_K(n, 3/2 + it) (x/n)^{3/2 + it}).
cplx R1(double x, double t, int K, const arith::ArithTable& table);

// int_0^T |R_1|^2 against T (x^{-2} sum_{n <= x} n c_n^2 + x^2 sum_{n > x} n^{-3} c_n^2),
// c_n = sum_k alpha_k(n) / ell^k, ell = log(T / 2 pi) / 2.
MomentResult r1_moment_check(double x, double T, int K, const arith::ArithTable& table,
                             const QuadratureOptions& opts = {});
double r1_predicted(double x, double T, int K, const arith::ArithTable& table);

}  // namespace xiprime::verify
