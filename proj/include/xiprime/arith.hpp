#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace xiprime::arith {

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{3} << 30;  // 3 GiB

// Smallest-prime-factor sieve. Serves the prime enumerations behind the
// prime-sum and psi diagnostics, and the table construction.
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }
  std::uint32_t smallest_factor(std::uint64_t n) const { return spf_[n]; }
  bool is_prime(std::uint64_t n) const { return n >= 2 && spf_[n] == n; }
  // Lambda(n): log p when n = p^a, else 0.
  double mangoldt(std::uint64_t n) const;

  struct PrimePower {
    std::uint64_t value;
    std::uint32_t prime;
    double log_prime;
  };
  // All prime powers <= bound (bound <= limit), ascending.
  std::vector<PrimePower> prime_powers(std::uint64_t bound) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

// Sieved values of Lambda, its Dirichlet powers Lambda_j and the coefficients
// alpha_k of the approximate Dirichlet series for xi''/xi'. All rows are
// indexed by n directly (slot 0 is unused and zero). Immutable once built.
class ArithTable {
 public:
  std::uint64_t n_max() const { return n_max_; }
  int j_max() const { return j_max_; }

  double lambda(std::uint64_t n) const { return lambda_j_[0][n]; }
  // j = 0 is the convolution identity (1 at n = 1, 0 elsewhere).
  double lambda_j(int j, std::uint64_t n) const;
  double alpha(int k, std::uint64_t n) const { return alpha_[k][n]; }

  std::span<const double> lambda_row(int j) const;
  std::span<const double> alpha_row(int k) const { return alpha_[k]; }

  static std::size_t bytes_required(std::uint64_t n_max, int j_max);

 private:
  friend ArithTable build_tables(std::uint64_t, int, std::size_t);
  friend ArithTable load_table(const std::filesystem::path&);

  std::uint64_t n_max_ = 0;
  int j_max_ = 0;
  std::vector<std::vector<double>> lambda_j_;  // rows j = 1..j_max
  std::vector<std::vector<double>> alpha_;     // rows k = 0..j_max
};

// Lambda_j = Lambda_{j-1} * Lambda by repeated sparse convolution over prime
// powers; alpha_0 = -Lambda and alpha_k = Lambda_{k-1} * (Lambda log).
// Throws a capacity error when the rows would exceed memory_budget bytes.
ArithTable build_tables(std::uint64_t n_max, int j_max,
                        std::size_t memory_budget = kDefaultMemoryBudget);

// Binary cache: "XPL1", n_max and j_max as u64 little-endian, then the rows
// lambda, lambda_1..lambda_jmax, alpha_0..alpha_jmax as f64 little-endian,
// each holding the values for n = 1..n_max.
void save_table(const ArithTable& table, const std::filesystem::path& path);
ArithTable load_table(const std::filesystem::path& path);
// Loads the cache when it matches (n_max, j_max); otherwise builds the table
// and rewrites the cache.
ArithTable load_or_build(const std::filesystem::path& path, std::uint64_t n_max,
                         int j_max, std::size_t memory_budget = kDefaultMemoryBudget);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Closed form C(a-1, j-1) (log p)^j for Lambda_j(p^a).
double lambda_j_prime_power(std::uint64_t p, int a, int j);

// a_K(n, s) = sum_{k <= K} alpha_k(n) / L^k with L = L(s) supplied.
std::complex<double> a_coefficient(const ArithTable& table, int K, std::uint64_t n,
                                   std::complex<double> L_value);

// S_{k,l}(x) = sum_{n <= x} Lambda_k(n) Lambda_l(n).
double S_sum(const ArithTable& table, int k, int l, double x);
// The same sum after unfolding Lambda_k = Lambda * Lambda_{k-1}; an identity.
double S_unfold_check(const ArithTable& table, int k, int l, double x);
// A_{k,l}(x) = sum_{n <= x} alpha_k(n) alpha_l(n).
double A_kl_sum(const ArithTable& table, int k, int l, double x);

// A(x) = sum_{n <= x} (sum_k alpha_k(n) / ell^k)^2 with ell = log(T / 2 pi) / 2.
double A_total(const ArithTable& table, int K, double x, double T);
// A(x) regrouped as diagonal A_{k,k} ell^{-2k} plus twice the off-diagonal sums.
double A_total_decomposed(const ArithTable& table, int K, double x, double T);

// Main terms of the asymptotic formulas.
double theory_S_kk(int k, double x);
double theory_A_total(int K, double x, double T);

struct PrimeLogSum {
  double empirical;
  double main_term;
};
// sum_{p <= x} (log p)^u / p * log(x/p)^v against (u-1)! v! / (u+v)! log^{u+v} x.
PrimeLogSum prime_log_sum(const PrimeSieve& sieve, int u, int v, double x);

// psi(x) = sum_{n <= x} Lambda(n).
double chebyshev_psi(const PrimeSieve& sieve, double x);

struct PsiVarianceReport {
  double X;
  double h;
  double integral_value;   // int_1^X (psi(x+h) - psi(x) - h)^2 dx
  double reference_value;  // h X log(X/h)
  double ratio;            // NaN when reference_value <= 0
};
// Exact integration: the integrand is constant between consecutive points of
// {q} and {q - h} over prime powers q.
PsiVarianceReport psi_variance(const PrimeSieve& sieve, double X, double h);

}  // namespace xiprime::arith
