#include "xiprime/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>

#include "xiprime/error.hpp"
#include "xiprime/parallel.hpp"

namespace xiprime::arith {

PrimeSieve::PrimeSieve(std::uint64_t limit) : limit_(limit) {
  if (limit > std::numeric_limits<std::uint32_t>::max() - 1) {
    throw capacity_error("prime sieve limit too large: " + std::to_string(limit));
  }
  spf_.assign(limit + 1, 0);
  // Linear sieve: every composite is crossed off exactly once, by its
  // smallest prime factor.
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes_) {
      const std::uint64_t m = std::uint64_t{p} * i;
      if (p > spf_[i] || m > limit) break;
      spf_[m] = p;
    }
  }
}

double PrimeSieve::mangoldt(std::uint64_t n) const {
  if (n < 2 || n > limit_) return 0.0;
  const std::uint32_t p = spf_[n];
  while (n % p == 0) n /= p;
  return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

std::vector<PrimeSieve::PrimePower> PrimeSieve::prime_powers(std::uint64_t bound) const {
  bound = std::min(bound, limit_);
  std::vector<PrimePower> out;
  for (std::uint32_t p : primes_) {
    if (p > bound) break;
    const double lp = std::log(static_cast<double>(p));
    for (std::uint64_t q = p; q <= bound; q *= p) {
      out.push_back({q, p, lp});
      if (q > bound / p) break;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.value < b.value; });
  return out;
}

double ArithTable::lambda_j(int j, std::uint64_t n) const {
  if (j == 0) return n == 1 ? 1.0 : 0.0;
  return lambda_j_[j - 1][n];
}

std::span<const double> ArithTable::lambda_row(int j) const {
  if (j < 1 || j > j_max_) throw range_error("lambda row out of range");
  return lambda_j_[j - 1];
}

std::size_t ArithTable::bytes_required(std::uint64_t n_max, int j_max) {
  const std::size_t rows = 2 * static_cast<std::size_t>(j_max) + 1;
  // Rows plus the construction sieve.
  return rows * (n_max + 1) * sizeof(double) + (n_max + 1) * sizeof(std::uint32_t);
}

namespace {

// out[n] += sum over prime powers q | n of weight(q) * in[n / q].
void convolve_prime_powers(const std::vector<PrimeSieve::PrimePower>& powers,
                           bool log_weighted, std::span<const double> in,
                           std::vector<double>& out) {
  const std::uint64_t n_max = out.size() - 1;
  for (const auto& pp : powers) {
    const double w = log_weighted
                         ? pp.log_prime * std::log(static_cast<double>(pp.value))
                         : pp.log_prime;
    const std::uint64_t m_max = n_max / pp.value;
    for (std::uint64_t m = 1; m <= m_max; ++m) {
      const double v = in[m];
      if (v != 0.0) out[m * pp.value] += w * v;
    }
  }
}

}  // namespace

ArithTable build_tables(std::uint64_t n_max, int j_max, std::size_t memory_budget) {
  if (n_max < 2) throw precondition_error("build_tables: n_max must be >= 2");
  if (j_max < 1) throw precondition_error("build_tables: j_max must be >= 1");
  const std::size_t need = ArithTable::bytes_required(n_max, j_max);
  if (need > memory_budget) {
    throw capacity_error("arithmetic table needs " + std::to_string(need) +
                         " bytes, budget is " + std::to_string(memory_budget));
  }

  ArithTable t;
  t.n_max_ = n_max;
  t.j_max_ = j_max;

  std::vector<PrimeSieve::PrimePower> powers;
  {
    PrimeSieve sieve(n_max);
    powers = sieve.prime_powers(n_max);
  }

  std::vector<double> identity(n_max + 1, 0.0);
  identity[1] = 1.0;

  t.lambda_j_.reserve(j_max);
  std::vector<double> lam(n_max + 1, 0.0);
  for (const auto& pp : powers) lam[pp.value] = pp.log_prime;
  t.lambda_j_.push_back(std::move(lam));
  for (int j = 2; j <= j_max; ++j) {
    std::vector<double> next(n_max + 1, 0.0);
    convolve_prime_powers(powers, false, t.lambda_j_.back(), next);
    t.lambda_j_.push_back(std::move(next));
  }

  t.alpha_.reserve(j_max + 1);
  std::vector<double> a0(n_max + 1, 0.0);
  for (std::uint64_t n = 1; n <= n_max; ++n) a0[n] = -t.lambda_j_[0][n];
  t.alpha_.push_back(std::move(a0));
  for (int k = 1; k <= j_max; ++k) {
    std::vector<double> ak(n_max + 1, 0.0);
    std::span<const double> prev =
        k == 1 ? std::span<const double>(identity) : std::span<const double>(t.lambda_j_[k - 2]);
    convolve_prime_powers(powers, true, prev, ak);
    t.alpha_.push_back(std::move(ak));
  }
  return t;
}

namespace {

constexpr char kMagic[4] = {'X', 'P', 'L', '1'};

template <class T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

void write_u64(std::ofstream& out, std::uint64_t v) {
  v = to_little_endian(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::ifstream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return to_little_endian(v);
}

void write_row(std::ofstream& out, std::span<const double> row) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(row.data() + 1),
              static_cast<std::streamsize>((row.size() - 1) * sizeof(double)));
  } else {
    for (std::size_t i = 1; i < row.size(); ++i) {
      const double v = to_little_endian(row[i]);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  }
}

void read_row(std::ifstream& in, std::vector<double>& row, std::uint64_t n_max) {
  row.assign(n_max + 1, 0.0);
  in.read(reinterpret_cast<char*>(row.data() + 1),
          static_cast<std::streamsize>(n_max * sizeof(double)));
  if constexpr (std::endian::native != std::endian::little) {
    for (auto& v : row) v = to_little_endian(v);
  }
}

}  // namespace

void save_table(const ArithTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open table cache for writing: " + path.string());
  out.write(kMagic, 4);
  write_u64(out, table.n_max());
  write_u64(out, static_cast<std::uint64_t>(table.j_max()));
  write_row(out, table.lambda_row(1));
  for (int j = 1; j <= table.j_max(); ++j) write_row(out, table.lambda_row(j));
  for (int k = 0; k <= table.j_max(); ++k) write_row(out, table.alpha_row(k));
  if (!out) throw io_error("failed writing table cache: " + path.string());
}

ArithTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open table cache: " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw parse_error("bad table cache magic in " + path.string());
  }
  const std::uint64_t n_max = read_u64(in);
  const std::uint64_t j_max = read_u64(in);
  if (!in || n_max < 2 || j_max < 1 || j_max > 64) {
    throw parse_error("bad table cache header in " + path.string());
  }
  const auto expected = 20 + (2 * j_max + 2) * n_max * sizeof(double);
  std::error_code ec;
  if (std::filesystem::file_size(path, ec) != expected || ec) {
    throw parse_error("table cache size mismatch in " + path.string());
  }
  ArithTable t;
  t.n_max_ = n_max;
  t.j_max_ = static_cast<int>(j_max);
  std::vector<double> skip;
  read_row(in, skip, n_max);  // lambda, duplicated as lambda_1
  t.lambda_j_.resize(j_max);
  for (auto& row : t.lambda_j_) read_row(in, row, n_max);
  t.alpha_.resize(j_max + 1);
  for (auto& row : t.alpha_) read_row(in, row, n_max);
  if (!in) throw parse_error("truncated table cache " + path.string());
  return t;
}

ArithTable load_or_build(const std::filesystem::path& path, std::uint64_t n_max, int j_max,
                         std::size_t memory_budget) {
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      ArithTable t = load_table(path);
      if (t.n_max() == n_max && t.j_max() == j_max) return t;
    } catch (const Error&) {
      // stale or foreign file; rebuild below
    }
  }
  ArithTable t = build_tables(n_max, j_max, memory_budget);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  save_table(t, path);
  return t;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i at every step.
    r = r * (n - k + i) / i;
  }
  return r;
}

double lambda_j_prime_power(std::uint64_t p, int a, int j) {
  if (a < 1 || j < 1) throw precondition_error("lambda_j_prime_power: a, j must be >= 1");
  const std::uint64_t c = binomial(static_cast<std::uint64_t>(a - 1),
                                   static_cast<std::uint64_t>(j - 1));
  return static_cast<double>(c) * std::pow(std::log(static_cast<double>(p)), j);
}

namespace {

std::uint64_t sum_limit(const ArithTable& table, double x, const char* what) {
  if (!(x >= 1.0)) return 0;
  const double fx = std::floor(x);
  if (fx > static_cast<double>(table.n_max())) {
    throw range_error(std::string(what) + ": x = " + std::to_string(x) +
                      " exceeds table extent " + std::to_string(table.n_max()));
  }
  return static_cast<std::uint64_t>(fx);
}

void check_order(const ArithTable& table, int k, int lo, const char* what) {
  if (k < lo || k > table.j_max()) {
    throw precondition_error(std::string(what) + ": order " + std::to_string(k) +
                             " outside [" + std::to_string(lo) + ", " +
                             std::to_string(table.j_max()) + "]");
  }
}

}  // namespace

std::complex<double> a_coefficient(const ArithTable& table, int K, std::uint64_t n,
                                   std::complex<double> L_value) {
  check_order(table, K, 0, "a_coefficient");
  if (n < 1 || n > table.n_max()) throw range_error("a_coefficient: n outside table");
  if (L_value == std::complex<double>(0.0, 0.0)) {
    throw domain_error("a_coefficient: L(s) = 0");
  }
  const std::complex<double> inv = 1.0 / L_value;
  // Horner in 1/L.
  std::complex<double> acc = table.alpha(K, n);
  for (int k = K - 1; k >= 0; --k) acc = acc * inv + table.alpha(k, n);
  return acc;
}

double S_sum(const ArithTable& table, int k, int l, double x) {
  check_order(table, k, 1, "S_sum");
  check_order(table, l, 1, "S_sum");
  const std::uint64_t n_hi = sum_limit(table, x, "S_sum");
  const auto a = table.lambda_row(k);
  const auto b = table.lambda_row(l);
  CompensatedSum<double> s;
  for (std::uint64_t n = 2; n <= n_hi; ++n) {
    if (a[n] != 0.0 && b[n] != 0.0) s.add(a[n] * b[n]);
  }
  return s.value();
}

double S_unfold_check(const ArithTable& table, int k, int l, double x) {
  check_order(table, k, 1, "S_unfold_check");
  check_order(table, l, 1, "S_unfold_check");
  const std::uint64_t n_hi = sum_limit(table, x, "S_unfold_check");
  if (n_hi < 2) return 0.0;
  PrimeSieve sieve(n_hi);
  CompensatedSum<double> s;
  for (const auto& pp : sieve.prime_powers(n_hi)) {
    CompensatedSum<double> inner;
    const std::uint64_t m_max = n_hi / pp.value;
    for (std::uint64_t m = 1; m <= m_max; ++m) {
      const double u = table.lambda_j(k - 1, m);
      if (u != 0.0) inner.add(u * table.lambda_j(l, m * pp.value));
    }
    s.add(pp.log_prime * inner.value());
  }
  return s.value();
}

double A_kl_sum(const ArithTable& table, int k, int l, double x) {
  check_order(table, k, 0, "A_kl_sum");
  check_order(table, l, 0, "A_kl_sum");
  const std::uint64_t n_hi = sum_limit(table, x, "A_kl_sum");
  const auto a = table.alpha_row(k);
  const auto b = table.alpha_row(l);
  CompensatedSum<double> s;
  for (std::uint64_t n = 2; n <= n_hi; ++n) {
    if (a[n] != 0.0 && b[n] != 0.0) s.add(a[n] * b[n]);
  }
  return s.value();
}

namespace {

double ell_of(double T) {
  const double ell = 0.5 * std::log(T / (2.0 * std::numbers::pi));
  if (!(ell > 0.0)) {
    throw domain_error("log(T / 2 pi) / 2 must be positive; T = " + std::to_string(T));
  }
  return ell;
}

}  // namespace

double A_total(const ArithTable& table, int K, double x, double T) {
  check_order(table, K, 0, "A_total");
  const double ell = ell_of(T);
  const std::uint64_t n_hi = sum_limit(table, x, "A_total");
  CompensatedSum<double> s;
  for (std::uint64_t n = 2; n <= n_hi; ++n) {
    double acc = table.alpha(K, n);
    for (int k = K - 1; k >= 0; --k) acc = acc / ell + table.alpha(k, n);
    if (acc != 0.0) s.add(acc * acc);
  }
  return s.value();
}

double A_total_decomposed(const ArithTable& table, int K, double x, double T) {
  check_order(table, K, 0, "A_total_decomposed");
  const double ell = ell_of(T);
  CompensatedSum<double> s;
  for (int k = 0; k <= K; ++k) {
    s.add(A_kl_sum(table, k, k, x) * std::pow(ell, -2.0 * k));
  }
  for (int k = 1; k <= K; ++k) {
    for (int l = 0; l < k; ++l) {
      s.add(2.0 * A_kl_sum(table, k, l, x) * std::pow(ell, -static_cast<double>(k + l)));
    }
  }
  return s.value();
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double theory_S_kk(int k, double x) {
  if (k < 1) throw precondition_error("theory_S_kk: k must be >= 1");
  return factorial(k) / factorial(2 * k - 1) * x * std::pow(std::log(x), 2 * k - 1);
}

double theory_A_total(int K, double x, double T) {
  const double ell = ell_of(T);
  const double lx = std::log(x);
  const double r = lx / ell;
  double series = 0.0;
  for (int k = 1; k <= K; ++k) {
    series += factorial(k - 1) / factorial(2 * k) * std::pow(r, 2 * k);
  }
  return x * lx * (1.0 - 2.0 * r + 2.0 * series);
}

PrimeLogSum prime_log_sum(const PrimeSieve& sieve, int u, int v, double x) {
  if (u < 2 || v < 1) throw precondition_error("prime_log_sum: need u >= 2, v >= 1");
  if (!(x >= 2.0)) throw precondition_error("prime_log_sum: need x >= 2");
  if (std::floor(x) > static_cast<double>(sieve.limit())) {
    throw range_error("prime_log_sum: x exceeds sieve limit");
  }
  const double lx = std::log(x);
  CompensatedSum<double> s;
  for (std::uint32_t p : sieve.primes()) {
    if (p > x) break;
    const double lp = std::log(static_cast<double>(p));
    s.add(std::pow(lp, u) / p * std::pow(lx - lp, v));
  }
  const double main = factorial(u - 1) * factorial(v) / factorial(u + v) * std::pow(lx, u + v);
  return {s.value(), main};
}

double chebyshev_psi(const PrimeSieve& sieve, double x) {
  if (!(x >= 2.0)) return 0.0;
  if (std::floor(x) > static_cast<double>(sieve.limit())) {
    throw range_error("chebyshev_psi: x exceeds sieve limit");
  }
  CompensatedSum<double> s;
  for (const auto& pp : sieve.prime_powers(static_cast<std::uint64_t>(x))) s.add(pp.log_prime);
  return s.value();
}

PsiVarianceReport psi_variance(const PrimeSieve& sieve, double X, double h) {
  if (!(h >= 0.0) || !(X > h) || !(X >= 1.0)) {
    throw precondition_error("psi_variance: need 0 <= h < X and X >= 1");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (h == 0.0) return {X, h, 0.0, 0.0, nan};
  if (static_cast<double>(sieve.limit()) < X + h) {
    throw range_error("psi_variance: sieve extent " + std::to_string(sieve.limit()) +
                      " below X + h");
  }
  const auto powers = sieve.prime_powers(static_cast<std::uint64_t>(std::floor(X + h)));

  // D(x) = psi(x + h) - psi(x) = sum of Lambda over (x, x + h]. Moving x
  // upward, D drops by Lambda(q) at x = q and gains Lambda(q) at x = q - h.
  double D = 0.0;
  for (const auto& pp : powers) {
    const double q = static_cast<double>(pp.value);
    if (q > 1.0 && q <= 1.0 + h) D += pp.log_prime;
  }
  std::size_t down = 0;  // next q with q > 1
  std::size_t up = 0;    // next q with q - h > 1
  while (up < powers.size() && static_cast<double>(powers[up].value) - h <= 1.0) ++up;

  CompensatedSum<double> integral;
  double x = 1.0;
  while (x < X) {
    const double next_down =
        down < powers.size() ? static_cast<double>(powers[down].value) : X;
    const double next_up =
        up < powers.size() ? static_cast<double>(powers[up].value) - h : X;
    const double xn = std::min({next_down, next_up, X});
    const double diff = D - h;
    integral.add(diff * diff * (xn - x));
    x = xn;
    if (x >= X) break;
    if (next_down == xn) D -= powers[down++].log_prime;
    if (next_up == xn) D += powers[up++].log_prime;
  }
  const double ref = h * X * std::log(X / h);
  const double value = integral.value();
  return {X, h, value, ref, ref > 0.0 ? value / ref : nan};
}

}  // namespace xiprime::arith
