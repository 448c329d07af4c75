#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "xiprime/error.hpp"
#include "xiprime/zeros.hpp"

using namespace xiprime;
using namespace xiprime::zeros;

namespace {

const ZeroSet& xi_1000() {
  static const ZeroSet z = find_zeros(Kind::xi, 0, 1000);
  return z;
}
const ZeroSet& xip_1000() {
  static const ZeroSet z = find_zeros(Kind::xi_prime, 0, 1000);
  return z;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("first zero") {
  const auto z = find_zeros(Kind::xi, 10, 15);
  REQUIRE(z.ordinates.size() == 1);
  CHECK(z.ordinates[0] == doctest::Approx(14.1347251417346937904).epsilon(1e-10));
  CHECK(find_zeros(Kind::xi, 0, 10).ordinates.empty());
  CHECK(find_zeros(Kind::xi_prime, 14.2, 21.0).ordinates.size() == 1);
}

TEST_CASE("29 zeros up to 100, matching the published table") {
  const auto z = find_zeros(Kind::xi, 0, 100);
  CHECK(z.ordinates.size() == 29);
  CHECK(z.warnings.empty());
  const auto a = count_audit(z);
  CHECK(a.counted == 29);
  CHECK(std::abs(a.smooth - 29.0) < 2.0);
  const auto pub = import_zeros(std::filesystem::path(XIPRIME_TEST_DATA) / "zeta_zeros_first30.txt");
  REQUIRE(pub.ordinates.size() == 30);
  for (std::size_t i = 0; i < 29; ++i) CHECK(std::abs(pub.ordinates[i] - z.ordinates[i]) <= 1e-6);
}

TEST_CASE("stored ordinates re-verify as sign changes") {
  for (const ZeroSet* z : {&xi_1000(), &xip_1000()}) {
    for (double g : z->ordinates) {
      const double tol = z->ordinate_tolerance;
      REQUIRE((target(z->kind, g - tol) > 0) != (target(z->kind, g + tol) > 0));
    }
  }
}

TEST_CASE("counts, interlacing and the N1 - N audit") {
  const auto& xi = xi_1000();
  const auto& xip = xip_1000();
  CHECK(std::abs(static_cast<double>(xi.ordinates.size()) - smooth_count(1000)) <= 2.0);
  const auto audit = count_audit(xi, &xip);
  REQUIRE(audit.n1_minus_n.has_value());
  CHECK(std::abs(*audit.n1_minus_n) <= 1);
  const auto rep = interlacing_report(xi, xip);
  CHECK(rep.pairs.size() == xi.ordinates.size() - 1);
  CHECK(rep.violations == 0);
  for (const auto& p : rep.pairs) CHECK(std::abs(p.offset) < 0.5 * (p.hi - p.lo));
  CHECK(rep.shift_cases > 100);
  CHECK(2 * rep.shift_toward_larger > rep.shift_cases);
  CHECK_THROWS_AS(count_audit(xi, &xi), Error);
}

TEST_CASE("Z' versus Xi' zeros") {
  const auto zp = find_zeros(Kind::z_prime, 0, 1000);
  const auto offs = compare_zprime(xip_1000(), zp, 20, 1000);
  REQUIRE(!offs.empty());
  CHECK(std::isfinite(offs.front().delta));
  CHECK(std::abs(offs.front().delta) < 3.0);
  // Between consecutive zeros of Z there is a zero of Z'.
  const auto z = find_zeros(Kind::xi, 14, 100);
  for (std::size_t i = 0; i + 1 < z.ordinates.size(); ++i) {
    const auto b = std::upper_bound(zp.ordinates.begin(), zp.ordinates.end(), z.ordinates[i]);
    REQUIRE(b != zp.ordinates.end());
    CHECK(*b < z.ordinates[i + 1]);
  }
  ZeroSet short_set = zp;
  short_set.ordinates.erase(short_set.ordinates.begin() + 30);
  short_set.ordinates.erase(short_set.ordinates.begin() + 20);
  CHECK_THROWS_AS(compare_zprime(xip_1000(), short_set, 20, 1000), Error);
}

TEST_CASE("Xi' and Z' zeros approach each other like 1/log^2") {
  const auto xip = find_zeros(Kind::xi_prime, 0, 10000);
  const auto zp = find_zeros(Kind::z_prime, 0, 10000);
  auto median_norm = [&](double lo, double hi) {
    auto offs = compare_zprime(xip, zp, lo, hi);
    std::vector<double> v;
    for (const auto& o : offs) v.push_back(std::abs(o.normalized));
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  const double m2 = median_norm(100, 1000);
  const double m3 = median_norm(1000, 10000);
  MESSAGE("median |delta| log^2: " << m2 << " on [1e2,1e3], " << m3 << " on [1e3,1e4]");
  CHECK(m3 <= m2);
  CHECK(m3 < 10.0);
}

TEST_CASE("export and import") {
  const auto path = temp_file("xiprime_zeros_roundtrip.txt");
  const auto z = find_zeros(Kind::xi, 0, 100);
  export_zeros(z, path);
  const auto back = import_zeros(path);
  CHECK(back.kind == Kind::imported);
  CHECK(back.source == path.string());
  CHECK(back.ordinates == z.ordinates);
  CHECK(back.t_max == z.t_max);
  CHECK(import_zeros(path, Kind::xi).kind == Kind::xi);

  {
    std::ofstream f(path);
    f << "# test\n14.1\n21.0\n20.5\n";
  }
  try {
    import_zeros(path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(":4:") != std::string::npos);
  }
  {
    std::ofstream f(path);
    f << "14.1\nabc\n";
  }
  CHECK_THROWS_AS(import_zeros(path), Error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(import_zeros(path), Error);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(find_zeros(Kind::xi, 10, 5), Error);
  CHECK_THROWS_AS(find_zeros(Kind::xi, 0, 2e6), Error);
  CHECK_THROWS_AS(find_zeros(Kind::imported, 0, 10), Error);
  CHECK(parse_kind("xi-prime") == Kind::xi_prime);
  CHECK_THROWS_AS(parse_kind("zeta"), Error);
}
