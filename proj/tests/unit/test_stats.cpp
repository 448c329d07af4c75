#include <cmath>
#include <numbers>

#include "doctest.h"
#include "xiprime/error.hpp"
#include "xiprime/stats.hpp"

using namespace xiprime;
using namespace xiprime::stats;
using std::numbers::pi;

namespace {

zeros::ZeroSet make_set(std::vector<double> v, double t_max) {
  zeros::ZeroSet z;
  z.ordinates = std::move(v);
  z.t_max = t_max;
  return z;
}

const zeros::ZeroSet& desk_zeros() {
  static const auto z = zeros::find_zeros(zeros::Kind::xi, 0, 10000);
  return z;
}

}  // namespace

TEST_CASE("closed-form small sets") {
  const auto grid = alpha_grid(0, 1, 0.05);
  const auto one = form_factor(make_set({100.0}, 1000.0), 1000.0, grid);
  for (double v : one.empirical) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

  const double g = 500.0, d = 0.7, T = 1000.0;
  const auto two = form_factor(make_set({g, g + d}, T), T, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double expect = 1.0 + std::cos(grid[i] * d * std::log(T)) * 4.0 / (4.0 + d * d);
    CHECK(two.empirical[i] == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK_THROWS_AS(form_factor(make_set({100.0}, 500.0), 1000.0, grid), Error);
  CHECK_THROWS_AS(form_factor(make_set({100.0}, 1000.0), 1000.0, grid, 0.0), Error);
}

TEST_CASE("estimator symmetry and grid independence") {
  const auto& z = desk_zeros();
  const auto sym = alpha_grid(-1, 1, 0.01);
  const auto f = form_factor(z, 10000, sym);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    const std::size_t j = sym.size() - 1 - i;
    REQUIRE(std::abs(sym[i] + sym[j]) < 1e-12);
  }
  // Grid values are start + i*step; mirror images differ in the last bits, so
  // compare on an exactly mirrored grid.
  std::vector<double> mirrored;
  for (double a : alpha_grid(0, 1, 0.01)) mirrored.push_back(-a);
  for (double a : alpha_grid(0, 1, 0.01)) mirrored.push_back(a);
  const auto fm = form_factor(z, 10000, mirrored);
  const std::size_t n = mirrored.size() / 2;
  for (std::size_t i = 0; i < n; ++i) REQUIRE(fm.empirical[i] == fm.empirical[n + i]);

  const std::vector<double> irregular = {0.0, 0.13, 0.5, 0.77};
  const auto fi = form_factor(z, 10000, irregular);
  const auto fu = form_factor(z, 10000, alpha_grid(0, 1, 0.01));
  CHECK(fi.empirical[0] == doctest::Approx(fu.empirical[0]).epsilon(1e-11));
  CHECK(fi.empirical[2] == doctest::Approx(fu.empirical[50]).epsilon(1e-11));
  CHECK(fu.empirical[0] >= 1.0);
  CHECK(f.n_zeros == 10142);
}

TEST_CASE("window soundness") {
  const auto& z = desk_zeros();
  const auto grid = alpha_grid(0, 1, 0.05);
  const auto f1 = form_factor(z, 10000, grid, 200);
  const auto f2 = form_factor(z, 10000, grid, 400);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(f1.empirical[i] - f2.empirical[i]) < f1.neglected_weight_bound);
  }
  CHECK_THROWS_AS(form_factor(z, 10000, grid, 5), Error);
}

TEST_CASE("theory curves") {
  const double T = 1e5;
  CHECK(theory_F1(0, T, 8) == doctest::Approx(std::log(T)));
  CHECK(theory_F1(0.5, 1e300, 40) == doctest::Approx(0.04460).epsilon(1e-4));
  CHECK(theory_F1(-0.37, T, 8) == theory_F1(0.37, T, 8));
  CHECK(theory_F_montgomery(0, T) == doctest::Approx(std::log(T)));
  CHECK(theory_F_montgomery(1, T) == doctest::Approx(1 + std::log(T) / (T * T)));
  CHECK(theory_F_montgomery(0.3, T) == doctest::Approx(0.3 + 1e-3 * std::log(T)));
  CHECK(sine_kernel_reference(0) == 0.0);
  CHECK(sine_kernel_reference(0.4) == 0.4);
  CHECK(sine_kernel_reference(2) == 1.0);
  CHECK(ah_theory_F(0.4) == doctest::Approx(0.4));
  CHECK(ah_theory_F(1.6) == doctest::Approx(0.4));
  CHECK(ah_theory_F(-1.6) == doctest::Approx(0.4));
  CHECK(ah_spikes(0, 3) == std::vector<double>{0, 2});
}

TEST_CASE("gap normalization") {
  CHECK(denormalize_ordinate(normalize_ordinate(14.134725)) == doctest::Approx(14.134725).epsilon(1e-14));
  CHECK(denormalize_ordinate(normalize_ordinate(98765.4321)) == doctest::Approx(98765.4321).epsilon(1e-14));
  const auto two = normalize_gaps(make_set({100.0, 103.0}, 200));
  REQUIRE(two.normalized_gaps.size() == 1);
  CHECK(two.normalized_gaps[0] == doctest::Approx(normalize_ordinate(103) - normalize_ordinate(100)));
  const auto g = normalize_gaps(desk_zeros(), {0.25});
  CHECK(std::abs(g.mean - 1.0) < 0.05);
  CHECK(g.fraction_below.count(0.91) == 1);
  CHECK(g.fraction_below.count(0.25) == 1);
  CHECK(g.fraction_below.at(1.0) > g.fraction_below.at(0.5));
  const auto h = gap_histogram(g, 0.1, 4.0);
  CHECK(h.size() == 40);
  std::size_t total = 0;
  for (const auto& b : h) total += b.count;
  CHECK(total == g.normalized_gaps.size());
  CHECK_THROWS_AS(normalize_gaps(make_set({1.0, 3.0}, 10)), Error);
}

TEST_CASE("AH process") {
  AHProcessSpec spec;
  spec.count = 20000;
  spec.seed = 42;
  const auto a = ah_generate(spec);
  const auto b = ah_generate(spec);
  CHECK(a.ordinates == b.ordinates);
  spec.seed = 43;
  CHECK(ah_generate(spec).ordinates != a.ordinates);

  AHProcessSpec bad;
  bad.gap_probabilities = {{0.5, 0.5}, {0.7, 0.5}};
  CHECK_THROWS_AS(ah_generate(bad), Error);
  bad.gap_probabilities = {{0.5, 0.5}, {1.0, 0.6}};
  CHECK_THROWS_AS(ah_generate(bad), Error);

  // Re-normalizing the raw ordinates recovers half-integer spacings.
  const auto g = normalize_gaps(a);
  for (double v : g.normalized_gaps) REQUIRE(std::abs(2 * v - std::round(2 * v)) < 1e-6);
}

TEST_CASE("picket fence spikes at even integers") {
  std::vector<double> x;
  for (int i = 0; i < 10000; ++i) x.push_back(1000.0 + i);
  const double ell = std::log(1e5 / (2 * pi));
  std::vector<double> alphas;
  for (double a : {0.0, 0.01, 0.02, 1.98, 2.0, 2.02}) alphas.push_back(a);
  const auto f = form_factor_normalized(x, alphas, ell, 200 * ell / (2 * pi));
  for (double v : f.empirical) CHECK(v >= 0.9);
}
