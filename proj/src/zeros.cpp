#include "xiprime/zeros.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "xiprime/error.hpp"
#include "xiprime/parallel.hpp"
#include "xiprime/special.hpp"

namespace xiprime::zeros {

namespace {

using std::numbers::pi;

// Ordinates closer to the origin than this are not scanned; Xi' and Z' vanish
// at t = 0 by symmetry and that zero is not part of any set.
constexpr double kScanFloor = 1.0e-3;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool positive(double v) { return v > 0.0; }

}  // namespace

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::xi: return "xi";
    case Kind::xi_prime: return "xi_prime";
    case Kind::z_prime: return "z_prime";
    case Kind::imported: return "imported";
  }
  return "imported";
}

Kind parse_kind(const std::string& s) {
  if (s == "xi") return Kind::xi;
  if (s == "xi-prime" || s == "xi_prime") return Kind::xi_prime;
  if (s == "z-prime" || s == "z_prime") return Kind::z_prime;
  if (s == "imported") return Kind::imported;
  throw config_error("unknown zero kind '" + s + "'");
}

std::size_t ZeroSet::count_up_to(double T) const {
  return static_cast<std::size_t>(std::upper_bound(ordinates.begin(), ordinates.end(), T) -
                                  ordinates.begin());
}

double target(Kind kind, double t) {
  switch (kind) {
    case Kind::xi: return special::Xi(t, true).value;
    case Kind::xi_prime: return special::Xi_prime(t, true).value;
    case Kind::z_prime: return special::Z_prime(t);
    case Kind::imported: break;
  }
  throw precondition_error("imported zero sets have no target function");
}

double smooth_count(double T) {
  if (T <= 0.0) return 0.0;
  const double u = T / (2.0 * pi);
  return u * std::log(u) - u + 7.0 / 8.0;
}

namespace {

double grid_step(double t, double c) { return c / std::log(std::max(t, 10.0)); }

double bisect(Kind kind, double lo, double flo, double hi, double tol) {
  for (int it = 0; it < 60 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = target(kind, mid);
    if (positive(fm) == positive(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ChunkResult {
  std::vector<double> roots;
};

ChunkResult scan_chunk(Kind kind, double a, double b, double t_hi, const GridPolicy& policy) {
  std::vector<double> ts{a};
  while (ts.back() < b) ts.push_back(std::min(b, ts.back() + grid_step(ts.back(), policy.c)));
  const std::size_t m = ts.size();  // ts[m-1] == b
  const double after = b + grid_step(b, policy.c);
  const bool has_after = after <= special::kMaxT;
  if (has_after) ts.push_back(after);

  std::vector<double> fs(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) fs[i] = target(kind, ts[i]);

  ChunkResult out;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (positive(fs[i]) != positive(fs[i + 1])) {
      out.roots.push_back(bisect(kind, ts[i], fs[i], ts[i + 1], policy.tolerance));
    }
  }
  // A local minimum of |f| without a sign change on either side may hide a
  // close pair of zeros; subdivide around it.
  for (std::size_t i = 1; i < m && i + 1 < ts.size(); ++i) {
    const bool s = positive(fs[i]);
    if (positive(fs[i - 1]) != s || positive(fs[i + 1]) != s) continue;
    if (!(std::abs(fs[i]) < std::abs(fs[i - 1]) && std::abs(fs[i]) <= std::abs(fs[i + 1]))) continue;
    const double lo = ts[i - 1];
    const double hi = ts[i + 1];
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / policy.close_pair_step));
    double tp = lo;
    double fp = fs[i - 1];
    for (std::size_t k = 1; k <= steps; ++k) {
      const double tn = k == steps ? hi : lo + static_cast<double>(k) * (hi - lo) / steps;
      const double fn = k == steps ? fs[i + 1] : target(kind, tn);
      if (positive(fn) != positive(fp)) out.roots.push_back(bisect(kind, tp, fp, tn, policy.tolerance));
      tp = tn;
      fp = fn;
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  std::erase_if(out.roots, [&](double r) { return r > t_hi; });
  return out;
}

}  // namespace

ZeroSet find_zeros(Kind kind, double t_lo, double t_hi, const GridPolicy& policy) {
  if (kind == Kind::imported) throw precondition_error("cannot scan for imported zeros");
  if (!(t_lo >= 0.0) || !(t_hi > t_lo)) throw range_error("find_zeros: need 0 <= t_lo < t_hi");
  if (t_hi > special::kMaxT) {
    throw range_error("find_zeros: t_hi = " + format_double(t_hi) + " exceeds validated range 1e6");
  }
  if (!(policy.c > 0.0) || !(policy.tolerance > 0.0) || !(policy.close_pair_step > 0.0) ||
      !(policy.chunk > 0.0)) {
    throw config_error("find_zeros: grid policy parameters must be positive");
  }
  const double start = std::max(t_lo, kScanFloor);
  const auto n_chunks = static_cast<std::size_t>(std::ceil((t_hi - start) / policy.chunk));
  std::vector<ChunkResult> results(n_chunks);
  parallel_blocks(n_chunks, [&](std::size_t c) {
    const double a = start + static_cast<double>(c) * policy.chunk;
    const double b = c + 1 == n_chunks ? t_hi : start + static_cast<double>(c + 1) * policy.chunk;
    results[c] = scan_chunk(kind, a, b, t_hi, policy);
  });

  ZeroSet zs;
  zs.kind = kind;
  zs.t_max = t_hi;
  zs.ordinate_tolerance = policy.tolerance;
  zs.source = "scan:" + kind_name(kind) + ":" + format_double(t_lo) + ":" + format_double(t_hi) +
              ":c=" + format_double(policy.c);
  for (auto& r : results) zs.ordinates.insert(zs.ordinates.end(), r.roots.begin(), r.roots.end());
  for (std::size_t i = 1; i < zs.ordinates.size(); ++i) {
    if (!(zs.ordinates[i] > zs.ordinates[i - 1])) {
      throw accuracy_error("find_zeros: merged ordinates not strictly ascending near t = " +
                           format_double(zs.ordinates[i]));
    }
  }
  // The smooth count is meaningless below the first zeta zero.
  const double expected = smooth_count(t_hi) - (start < 14.0 ? 0.0 : smooth_count(start));
  const double counted = static_cast<double>(zs.ordinates.size());
  if (std::abs(counted - expected) > 2.0) {
    zs.warnings.push_back("audit mismatch: counted " + format_double(counted) + " zeros, smooth count " +
                          format_double(expected));
  }
  return zs;
}

CountAudit count_audit(const ZeroSet& zs, const ZeroSet* other) {
  CountAudit a;
  a.counted = zs.ordinates.size();
  a.smooth = smooth_count(zs.t_max);
  if (other != nullptr) {
    const ZeroSet* xi = nullptr;
    const ZeroSet* xip = nullptr;
    for (const ZeroSet* s : {&zs, other}) {
      if (s->kind == Kind::xi) xi = s;
      if (s->kind == Kind::xi_prime) xip = s;
    }
    if (xi == nullptr || xip == nullptr) {
      throw precondition_error("count_audit: need one xi and one xi_prime set");
    }
    const double T = std::min(xi->t_max, xip->t_max);
    a.n1_minus_n = static_cast<long>(xip->count_up_to(T)) - static_cast<long>(xi->count_up_to(T));
  }
  return a;
}

InterlacingReport interlacing_report(const ZeroSet& xi, const ZeroSet& xip) {
  InterlacingReport r;
  const auto& g = xi.ordinates;
  const auto& d = xip.ordinates;
  std::size_t j = 0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double lo = g[i];
    const double hi = g[i + 1];
    if (hi > xip.t_max) break;
    while (j < d.size() && d[j] <= lo) ++j;
    std::size_t k = j;
    while (k < d.size() && d[k] < hi) ++k;
    const std::size_t inside = k - j;
    const double offset = inside == 1 ? d[j] - 0.5 * (lo + hi) : std::nan("");
    r.pairs.push_back({lo, hi, inside, offset});
    if (inside != 1) ++r.violations;
  }
  for (std::size_t i = 1; i + 1 < r.pairs.size(); ++i) {
    const auto& p = r.pairs[i];
    if (p.inside != 1) continue;
    const double left = r.pairs[i - 1].hi - r.pairs[i - 1].lo;
    const double right = r.pairs[i + 1].hi - r.pairs[i + 1].lo;
    if (left == right || p.offset == 0.0) continue;
    ++r.shift_cases;
    if ((right > left) == (p.offset > 0.0)) ++r.shift_toward_larger;
  }
  return r;
}

std::vector<ZprimeOffset> compare_zprime(const ZeroSet& xip, const ZeroSet& zp, double t_lo,
                                         double t_hi) {
  auto slice = [&](const ZeroSet& s) {
    auto b = std::lower_bound(s.ordinates.begin(), s.ordinates.end(), t_lo);
    auto e = std::upper_bound(s.ordinates.begin(), s.ordinates.end(), t_hi);
    return std::vector<double>(b, e);
  };
  if (xip.t_max < t_hi || zp.t_max < t_hi) {
    throw precondition_error("compare_zprime: sets do not cover the requested range");
  }
  const auto a = slice(xip);
  const auto b = slice(zp);
  const auto na = static_cast<long>(a.size());
  const auto nb = static_cast<long>(b.size());
  if (std::abs(na - nb) > 1 || na == 0 || nb == 0) {
    throw domain_error("compare_zprime: pairing failed, " + std::to_string(na) + " Xi' zeros vs " +
                       std::to_string(nb) + " Z' zeros in range");
  }
  // A zero near either end of the range may have its partner just outside;
  // choose the index alignment with the smallest total displacement.
  long best_shift = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (long shift = -1; shift <= 1; ++shift) {
    const long lo = std::max(0L, -shift);
    const long hi = std::min(na, nb - shift);
    if (hi - lo < std::min(na, nb)) continue;
    double cost = 0.0;
    for (long i = lo; i < hi; ++i) cost += std::abs(a[i] - b[i + shift]);
    if (cost < best_cost) {
      best_cost = cost;
      best_shift = shift;
    }
  }
  std::vector<ZprimeOffset> out;
  for (long i = std::max(0L, -best_shift); i < std::min(na, nb - best_shift); ++i) {
    const double delta = a[i] - b[i + best_shift];
    const double l = std::log(a[i]);
    out.push_back({a[i], delta, delta * l * l});
  }
  return out;
}

void export_zeros(const ZeroSet& zs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
  out << "# xiprime zero set\n";
  out << "# kind=" << kind_name(zs.kind) << "\n";
  out << "# t_max=" << format_double(zs.t_max) << "\n";
  out << "# tolerance=" << format_double(zs.ordinate_tolerance) << "\n";
  out << "# count=" << zs.ordinates.size() << "\n";
  for (double v : zs.ordinates) out << format_double(v) << "\n";
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& v) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(v);
}

}  // namespace

ZeroSet import_zeros(const std::filesystem::path& path, Kind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open zero file '" + path.string() + "'");
  ZeroSet zs;
  zs.kind = kind;
  zs.source = path.string();
  std::optional<double> header_t_max;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    return parse_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      const auto eq = s.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(s.substr(1, eq - 1));
      const std::string value = trim(s.substr(eq + 1));
      double v = 0.0;
      if (key == "t_max" && parse_double(value, v)) header_t_max = v;
      if (key == "tolerance" && parse_double(value, v)) zs.ordinate_tolerance = v;
      continue;
    }
    double v = 0.0;
    if (!parse_double(s, v)) throw fail("not a decimal ordinate: '" + s + "'");
    if (!(v > 0.0)) throw fail("ordinate must be positive");
    if (!zs.ordinates.empty() && !(v > zs.ordinates.back())) {
      throw fail("ordinates not strictly ascending (" + s + " after " +
                 format_double(zs.ordinates.back()) + ")");
    }
    zs.ordinates.push_back(v);
  }
  const double last = zs.ordinates.empty() ? 0.0 : zs.ordinates.back();
  zs.t_max = header_t_max.value_or(last);
  if (zs.t_max < last) {
    throw parse_error(path.string() + ": header t_max below the largest ordinate");
  }
  return zs;
}

}  // namespace xiprime::zeros
