#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace xiprime::zeros {

enum class Kind { xi, xi_prime, z_prime, imported };

std::string kind_name(Kind k);
// Accepts "xi", "xi-prime", "xi_prime", "z-prime", "z_prime", "imported".
Kind parse_kind(const std::string& s);

struct ZeroSet {
  Kind kind = Kind::imported;
  std::vector<double> ordinates;  // strictly ascending, in (0, t_max]
  double t_max = 0.0;
  double ordinate_tolerance = 0.0;
  std::string source;
  std::vector<std::string> warnings;

  std::size_t count_up_to(double T) const;
};

// The real function whose sign changes are the zeros of the given kind:
// Xi/E, Xi'/E or Z'.
double target(Kind kind, double t);

struct GridPolicy {
  double c = 1.0;                  // grid step c / log t
  double tolerance = 1.0e-9;       // bisection stops below this bracket width
  double close_pair_step = 1.0e-4; // subdivision step at suspected close pairs
  double chunk = 100.0;            // independent scan sub-interval length
};

// Sign-change scan plus bisection on (t_lo, t_hi]. Appends a warning when the
// count deviates from the smooth count by more than 2.
ZeroSet find_zeros(Kind kind, double t_lo, double t_hi, const GridPolicy& policy = {});

// (T/2pi) log(T/2pi) - T/2pi + 7/8.
double smooth_count(double T);

struct CountAudit {
  std::size_t counted = 0;
  double smooth = 0.0;
  std::optional<long> n1_minus_n;
};
// With a second set supplied, one must be of kind xi and the other xi_prime;
// n1_minus_n is then N1(T) - N(T) at the common ceiling T.
CountAudit count_audit(const ZeroSet& zs, const ZeroSet* other = nullptr);

struct InterlacingPair {
  double lo;
  double hi;
  std::size_t inside;
  double offset;  // signed distance of the inside zero from (lo + hi)/2
};

struct InterlacingReport {
  std::vector<InterlacingPair> pairs;
  std::size_t violations = 0;
  // Gaps with both neighbouring gaps present and of unequal length, and how
  // many of those have the derivative zero displaced toward the larger one.
  std::size_t shift_cases = 0;
  std::size_t shift_toward_larger = 0;
};

InterlacingReport interlacing_report(const ZeroSet& xi, const ZeroSet& xip);

struct ZprimeOffset {
  double t;
  double delta;       // gamma(Xi') - gamma(Z')
  double normalized;  // delta * log(gamma)^2
};
// Pairs the zeros of both sets inside [t_lo, t_hi] in order. The counts may
// differ by one through a partner lying just outside the range; larger
// differences throw.
std::vector<ZprimeOffset> compare_zprime(const ZeroSet& xip, const ZeroSet& zp, double t_lo,
                                         double t_hi);

// Text format: '#' comment lines, then one ordinate per line.
void export_zeros(const ZeroSet& zs, const std::filesystem::path& path);
ZeroSet import_zeros(const std::filesystem::path& path, Kind kind = Kind::imported);

}  // namespace xiprime::zeros
