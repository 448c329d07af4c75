#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "xiprime/error.hpp"
#include "xiprime/special.hpp"

using namespace xiprime;
using namespace xiprime::special;
using std::numbers::pi;

namespace {

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// zeta(s) from the alternating eta series with Borwein's acceleration,
// d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!).
cplx eta_zeta(cplx s) {
  const int n = 40 + static_cast<int>(std::ceil(0.9 * std::abs(s.imag())));
  std::vector<double> d(n + 1);
  double term = 1.0 / n;
  double sum = term;
  d[0] = sum * n;
  for (int i = 1; i <= n; ++i) {
    term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i - 1) * (2.0 * i));
    sum += term;
    d[i] = sum * n;
  }
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * (d[k] - d[n]) * std::exp(-s * std::log(k + 1.0));
  }
  const cplx eta = -acc / d[n];
  return eta / (1.0 - std::exp((1.0 - s) * std::log(2.0)));
}

}  // namespace

TEST_CASE("gamma family") {
  CHECK(near(log_gamma({0.25, 7}), {-10.562953339040002, 6.2301605005296513}, 1e-13));
  CHECK(near(log_gamma({3.5, -2}), {0.58073321208126817, -2.3353168419161628}, 1e-13));
  CHECK(near(log_gamma({-0.75, 40}), {-66.524184723302316, 105.57319537190646}, 1e-13));
  CHECK(near(digamma({0.25, 7}), {1.9456973736998503, 1.6065564616259579}, 1e-13));
  CHECK(near(digamma({3.5, -2}), {1.2837361971973439, -0.58507518451034648}, 1e-13));
  CHECK(near(digamma({-0.75, 40}), {3.6893415287822292, 1.602037785009547}, 1e-13));
  CHECK(near(trigamma({0.25, 7}), {-0.005121776147465863, -0.14291799034090012}, 1e-13));
  CHECK(near(trigamma({3.5, -2}), {0.23106546973188553, 0.15211307497020948}, 1e-13));
  CHECK(near(trigamma({-0.75, 40}), {-0.00078060952287190324, -0.024976904509443356}, 1e-13));
  CHECK(digamma(1.0).real() == doctest::Approx(-0.5772156649015329).epsilon(1e-14));
  CHECK_THROWS_AS(digamma(-3.0), Error);
}

TEST_CASE("L and L'") {
  CHECK(L_func(2.0).real() == doctest::Approx(1.5 - 0.5 * std::log(pi) - 0.5 * 0.5772156649015329));
  CHECK(near(L_func(2.0), 0.63902722462453348, 1e-14));
  CHECK(near(L_prime(2.0), -0.83876648328794339, 1e-14));
  CHECK(near(L_func({1.5, 50}), {1.0378640760801733, 0.7404176467617295}, 1e-13));
  CHECK(near(L_prime({1.5, 50}), {0.00089883166300118493, -0.0099683781215247077}, 1e-12));
  CHECK(near(L_func({-0.5, 1000}), {2.5349375854564338, 0.78414816558494317}, 1e-13));
  CHECK(near(L_prime({-0.5, 1000}), {1.249993437525703e-6, -0.0005000030416531813}, 1e-12));
  CHECK(near(L_func({0.5, 14}), {0.40048374392522506, 0.66060307157731014}, 1e-13));
  CHECK(near(L_prime({0.5, 14}), {0.0088846742235092087, -0.035729497585225031}, 1e-12));
  const cplx s(0.7, 23.0);
  CHECK(L_func(std::conj(s)) == std::conj(L_func(s)));
  const cplx s1(0.5, 1000.0);
  CHECK(std::abs(L_func(s1) - 0.5 * std::log(s1 / (2 * pi))) <= 1e-2);
  for (double x : {1.0, 0.0, -2.0, -4.0}) {
    CHECK_THROWS_AS(L_func(x), Error);
    CHECK_THROWS_AS(L_prime(x), Error);
  }
  double worst_l = 0.0, worst_lp = 0.0;
  for (double sigma : {-0.5, 1.5}) {
    for (double lt = 1.0; lt <= 5.0; lt += 0.05) {
      const cplx z(sigma, std::pow(10.0, lt));
      worst_l = std::max(worst_l, std::abs(L_func(z) - 0.5 * std::log(z / (2 * pi))) * (std::abs(z) + 2));
      worst_lp = std::max(worst_lp, std::abs(L_prime(z)) * (std::abs(z) + 2));
    }
  }
  CHECK(worst_l < 5.0);
  CHECK(worst_lp < 5.0);
}

TEST_CASE("zeta jets") {
  auto z = zeta_jet({0.5, 30});
  CHECK(near(z.value, {-0.1206422875900437, -0.58369121476370629}, 1e-12));
  CHECK(near(z.d1, {1.5377408181024704, 0.15789165631692498}, 1e-12));
  CHECK(near(z.d2, {-2.2795782654351408, 0.30563265840551958}, 1e-12));
  z = zeta_jet({1.5, 1000});
  CHECK(near(z.value, {0.95554458130341149, -0.096132417651595511}, 1e-12));
  CHECK(near(z.d1, {-0.012138562460407193, -0.095585026663313129}, 1e-12));
  CHECK(near(z.d2, {0.0047935551761072226, 0.40975643106167661}, 1e-12));
  z = zeta_jet({0.5, 199});
  CHECK(near(z.value, {1.9587644389059075, 4.0649415839878111}, 1e-11));
  CHECK(near(z.d1, {0.51965063443339287, -8.9041857902491668}, 1e-11));
  CHECK(near(z.d2, {-5.8453541045231062, 22.389624270268977}, 1e-11));
}

TEST_CASE("theta") {
  const double th[][3] = {{0, 0.0, -2.6860917096128328},
                          {1, -1.7675479528122904, -1.0125730965517336},
                          {5, -3.4596203753634625, -0.11505910912279887},
                          {9.99, -3.0693933464976884, 0.23164464449944148},
                          {10, -3.0670743962898953, 0.23214531343246514},
                          {17, -0.43111498387316081, 0.49759600743321585},
                          {100, 87.97216523178722, 1.3836444764195794},
                          {1000, 2034.5464280380316, 2.5349390854530588}};
  for (const auto& r : th) {
    CHECK(theta(r[0]) == doctest::Approx(r[1]).epsilon(1e-12));
    CHECK(theta_prime(r[0]) == doctest::Approx(r[2]).epsilon(1e-12));
  }
  CHECK(theta(-17.0) == -theta(17.0));
}

TEST_CASE("Z against reference values") {
  const double zr[][3] = {{0, -1.4603545088095868, 0.0},
                          {3, -0.5385471385417072, -0.044254061993508726},
                          {14, -0.10562626777988261, 0.77450534841547557},
                          {50, -0.34073500595502498, -1.5770581952608675},
                          {150, -0.091010923267403593, 1.7785614839182792},
                          {199.5, 5.9710861536496423, 1.199709183893695},
                          {200.5, 3.5786759250688392, -4.9910135688169431},
                          {500, 1.4724478510550853, -4.9431853157250021},
                          {1000, 0.99779463752158661, 4.7642936932417063},
                          {5000, -0.80425723635293985, 3.0177063302829822},
                          {20000, 1.3447013347897105, -9.5953598683836517}};
  for (const auto& r : zr) {
    const ZValue v = Z_with_derivative(r[0]);
    INFO("t = " << r[0]);
    CHECK(std::abs(v.z - r[1]) <= std::max(v.est_abs_error, 1e-10));
    CHECK(std::abs(v.z - r[1]) <= 1e-6);
    CHECK(std::abs(v.dz - r[2]) <= 1e-5);
  }
  CHECK(Z(-50.0) == Z(50.0));
  CHECK(Z_prime(-50.0) == -Z_prime(50.0));
  CHECK_THROWS_AS(Z(2e6), Error);
}

TEST_CASE("Z against the eta series") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int i = 0; i < 50; ++i) {
    const double t = u(rng);
    CHECK(std::abs(std::abs(Z(t)) - std::abs(eta_zeta({0.5, t}))) <= 1e-6);
  }
  int changes = 0;
  double prev = Z(14.0);
  for (double t = 14.01; t <= 15.0; t += 0.01) {
    const double z = Z(t);
    if ((z > 0) != (prev > 0)) ++changes;
    prev = z;
  }
  CHECK(changes == 1);
}

TEST_CASE("Xi values") {
  CHECK(Xi(0, false).value == doctest::Approx(0.49712077818831411).epsilon(1e-12));
  CHECK(std::abs(Xi(14.134725141734695, false).value) <= 1e-15);
  CHECK(Xi(30, false).value == doctest::Approx(-1.5016622479802074e-8).epsilon(1e-9));
  CHECK(Xi_prime(30, false).value == doctest::Approx(4.8053808547193483e-8).epsilon(1e-9));
  CHECK(Xi_prime(14.134725141734695, false).value ==
        doctest::Approx(-0.0013827190892162528).epsilon(1e-9));
  CHECK(Xi_prime(0, true).value == 0.0);
  CHECK_THROWS_AS(Xi(60, false), Error);
  CHECK_NOTHROW(Xi(60, true));
  for (double t : {3.0, 21.5, 37.0, 49.0}) {
    const auto s = Xi(t, true);
    const auto u = Xi(t, false);
    CHECK((s.value > 0) == (u.value > 0));
    CHECK(std::exp(log_envelope(t)) > 0.0);
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-900.0, 900.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng);
    REQUIRE(Xi(t, true).value == Xi(-t, true).value);
  }
}

TEST_CASE("Xi' analytic versus finite difference") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(20.0, 500.0);
  const double h = 1e-4;
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng);
    // Finite difference of the unscaled Xi, expressed relative to E(t).
    auto g = [&](double s) { return Xi(s, true).value * std::exp(log_envelope(s) - log_envelope(t)); };
    const double fd = (g(t - 2 * h) - 8 * g(t - h) + 8 * g(t + h) - g(t + 2 * h)) / (12 * h);
    const double an = Xi_prime(t, true).value;
    INFO("t = " << t);
    CHECK(std::abs(an - fd) <= 1e-5 * std::max(std::abs(fd), 1.0));
    CHECK(std::abs(Xi_prime_fd(t, true).value - an) <= 1e-5 * std::max(std::abs(an), 1.0));
  }
}

TEST_CASE("one Xi' sign change between the first two Xi zeros") {
  int changes = 0;
  double prev = Xi_prime(14.1348, true).value;
  for (double t = 14.1448; t < 21.0220; t += 0.01) {
    const double v = Xi_prime(t, true).value;
    if ((v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  CHECK(changes == 1);
}
