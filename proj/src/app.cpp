#include "xiprime/app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "xiprime/error.hpp"
#include "xiprime/parallel.hpp"

namespace xiprime::app {

namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  const std::string s = trim(value);
  const char* first = s.data();
  if (!s.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw config_error("setting " + key + ": '" + value + "' is not a number");
  }
  return v;
}

// Integers may be written as 1e6.
std::uint64_t parse_count(const std::string& key, const std::string& value) {
  const double v = parse_real(key, value);
  if (v < 0.0 || v != std::floor(v) || v > 1.0e18) {
    throw config_error("setting " + key + ": '" + value + "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

int parse_int(const std::string& key, const std::string& value) {
  const std::uint64_t v = parse_count(key, value);
  if (v > 1000) throw config_error("setting " + key + ": " + value + " too large");
  return static_cast<int>(v);
}

std::string key_of(const std::string& prefix, double v) { return prefix + format_number(v); }

}  // namespace

const std::vector<SettingKey>& setting_keys() {
  static const std::vector<SettingKey> keys = {
      {"t_max", "--t-max", "zero ceiling / form factor height T"},
      {"n_max", "--n-max", "arithmetic table extent"},
      {"K", "--K", "form factor theory truncation"},
      {"j_max", "--j-max", "highest Lambda_j row in the table"},
      {"window", "--window", "pair window for form factors"},
      {"alpha_start", "--alpha-start", "alpha grid start"},
      {"alpha_stop", "--alpha-stop", "alpha grid stop"},
      {"alpha_step", "--alpha-step", "alpha grid step"},
      {"alpha_grid", "--alpha-grid", "start,stop,step"},
      {"cache_dir", "--cache-dir", "cache directory"},
      {"seed", "--seed", "AH simulation seed"},
      {"memory_budget", "--memory-budget", "table memory budget in bytes"},
      {"threads", "--threads", "worker threads (0 = hardware)"},
      {"ah_count", "--ah-count", "AH simulation point count"},
      {"ef_K", "--ef-K", "explicit formula truncation"},
      {"ef_window", "--ef-window", "explicit formula zero window"},
  };
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "t_max") {
    cfg.t_max = parse_real(key, value);
  } else if (key == "n_max") {
    cfg.n_max = parse_count(key, value);
  } else if (key == "K") {
    cfg.K = parse_int(key, value);
  } else if (key == "j_max") {
    cfg.j_max = parse_int(key, value);
  } else if (key == "window") {
    cfg.window = parse_real(key, value);
  } else if (key == "alpha_start") {
    cfg.alpha.start = parse_real(key, value);
  } else if (key == "alpha_stop") {
    cfg.alpha.stop = parse_real(key, value);
  } else if (key == "alpha_step") {
    cfg.alpha.step = parse_real(key, value);
  } else if (key == "alpha_grid") {
    std::vector<std::string> parts;
    std::stringstream ss(value);
    for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
    if (parts.size() != 3) throw config_error("setting alpha_grid: expected start,stop,step");
    cfg.alpha = {parse_real(key, parts[0]), parse_real(key, parts[1]), parse_real(key, parts[2])};
  } else if (key == "cache_dir") {
    if (trim(value).empty()) throw config_error("setting cache_dir: empty path");
    cfg.cache_dir = trim(value);
  } else if (key == "seed") {
    cfg.seed = parse_count(key, value);
  } else if (key == "memory_budget") {
    cfg.memory_budget = parse_count(key, value);
  } else if (key == "threads") {
    cfg.threads = static_cast<unsigned>(parse_int(key, value));
  } else if (key == "ah_count") {
    cfg.ah_count = parse_count(key, value);
  } else if (key == "ef_K") {
    cfg.ef_K = parse_int(key, value);
  } else if (key == "ef_window") {
    cfg.ef_window = parse_real(key, value);
  } else {
    throw config_error("unknown setting '" + key + "'");
  }
}

void apply_config_file(RunConfig& cfg, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string s = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw config_error(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const Error& e) {
      throw config_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_environment(RunConfig& cfg) {
  if (const char* env = std::getenv("XIPRIME_CACHE"); env && *env) cfg.cache_dir = env;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.t_max > 2.0 * pi)) throw config_error("t_max must exceed 2 pi");
  if (cfg.n_max < 2) throw config_error("n_max must be >= 2");
  if (cfg.j_max < 1) throw config_error("j_max must be >= 1");
  if (cfg.K < 1) throw config_error("K must be >= 1");
  if (cfg.K > cfg.j_max) {
    throw config_error("K = " + std::to_string(cfg.K) + " exceeds j_max = " +
                       std::to_string(cfg.j_max));
  }
  if (cfg.ef_K < 0 || cfg.ef_K > cfg.j_max) throw config_error("ef_K must lie in [0, j_max]");
  if (!(cfg.window > 0.0)) throw config_error("window must be positive");
  if (!(cfg.ef_window >= verify::kMinWindow)) throw config_error("ef_window must be >= 500");
  if (!(cfg.alpha.step > 0.0) || !(cfg.alpha.stop >= cfg.alpha.start)) {
    throw config_error("alpha grid needs step > 0 and stop >= start");
  }
  if (cfg.memory_budget == 0) throw config_error("memory_budget must be positive");
  if (cfg.ah_count < 2) throw config_error("ah_count must be >= 2");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw io_error("cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  const fs::path tmp = path.string() + ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + tmp.string() + "' for writing");
    out << text;
    if (!out) throw io_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw io_error("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
}

namespace {

fs::path ensure_cache(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.cache_dir, ec);
  if (ec) throw io_error("cannot create cache dir '" + cfg.cache_dir.string() + "': " + ec.message());
  return cfg.cache_dir;
}

}  // namespace

zeros::ZeroSet cached_zeros(const RunConfig& cfg, zeros::Kind kind, double t_max) {
  const fs::path dir = ensure_cache(cfg);
  const fs::path path = dir / ("zeros-" + zeros::kind_name(kind) + key_of("-T", t_max) + ".txt");
  if (fs::exists(path)) return zeros::import_zeros(path, kind);
  zeros::ZeroSet zs = zeros::find_zeros(kind, 0.0, t_max);
  const fs::path tmp = path.string() + ".part";
  zeros::export_zeros(zs, tmp);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw io_error("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
  // Return what a later run will read back, so cold and warm runs agree.
  zeros::ZeroSet back = zeros::import_zeros(path, kind);
  back.warnings = std::move(zs.warnings);
  return back;
}

arith::ArithTable cached_table(const RunConfig& cfg, std::uint64_t n_max, int j_max) {
  const fs::path dir = ensure_cache(cfg);
  const fs::path path = dir / ("arith-n" + std::to_string(n_max) + "-j" + std::to_string(j_max) + ".bin");
  return arith::load_or_build(path, n_max, j_max, cfg.memory_budget);
}

zeros::ZeroSet load_zero_file(const fs::path& path, std::optional<zeros::Kind> kind) {
  if (!kind) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open zero file '" + path.string() + "'");
    std::string line;
    while (std::getline(in, line)) {
      const std::string s = trim(line);
      if (s.empty()) continue;
      if (s[0] != '#') break;
      const auto eq = s.find('=');
      if (eq != std::string::npos && trim(s.substr(1, eq - 1)) == "kind") {
        kind = zeros::parse_kind(trim(s.substr(eq + 1)));
        break;
      }
    }
  }
  return zeros::import_zeros(path, kind.value_or(zeros::Kind::imported));
}

std::string form_factor_csv(const stats::FormFactorCurve& f) {
  std::string s = "alpha,empirical,theory_f1,theory_montgomery,sine_ref\n";
  for (std::size_t i = 0; i < f.alphas.size(); ++i) {
    s += format_number(f.alphas[i]) + "," + format_number(f.empirical[i]) + "," +
         format_number(f.theory_f1[i]) + "," + format_number(f.theory_montgomery[i]) + "," +
         format_number(f.sine_ref[i]) + "\n";
  }
  return s;
}

std::string interlacing_csv(const zeros::InterlacingReport& r) {
  std::string s = "gap_lo,gap_hi,midpoint,offset,inside,violations\n";
  for (const auto& p : r.pairs) {
    s += format_number(p.lo) + "," + format_number(p.hi) + "," + format_number(0.5 * (p.lo + p.hi)) +
         "," + format_number(p.offset) + "," + std::to_string(p.inside) + "," +
         (p.inside == 1 ? "0" : "1") + "\n";
  }
  return s;
}

std::string zprime_csv(const std::vector<zeros::ZprimeOffset>& rows) {
  std::string s = "t,delta,normalized\n";
  for (const auto& r : rows) {
    s += format_number(r.t) + "," + format_number(r.delta) + "," + format_number(r.normalized) + "\n";
  }
  return s;
}

std::string histogram_csv(const std::vector<stats::HistogramBin>& bins) {
  std::string s = "bin_lo,bin_hi,count\n";
  for (const auto& b : bins) {
    s += format_number(b.lo) + "," + format_number(b.hi) + "," + std::to_string(b.count) + "\n";
  }
  return s;
}

std::string ah_curve_csv(const stats::NormalizedFormFactor& f) {
  std::string s = "alpha,empirical,theory\n";
  for (std::size_t i = 0; i < f.alphas.size(); ++i) {
    s += format_number(f.alphas[i]) + "," + format_number(f.empirical[i]) + "," +
         format_number(stats::ah_theory_F(f.alphas[i])) + "\n";
  }
  return s;
}

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json complex_json(verify::cplx z) { return json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

}  // namespace

json interlacing_summary(const zeros::InterlacingReport& r) {
  return json{{"gaps", r.pairs.size()},
              {"violations", r.violations},
              {"shift_cases", r.shift_cases},
              {"shift_toward_larger", r.shift_toward_larger}};
}

json gap_report(const stats::GapStats& g) {
  json fr = json::array();
  for (const auto& [t, f] : g.fraction_below) fr.push_back({{"threshold", t}, {"fraction", f}});
  return json{{"count", g.normalized_gaps.size()}, {"mean", number(g.mean)}, {"fraction_below", fr}};
}

json explicit_report_json(const verify::ExplicitFormulaReport& rep) {
  json samples = json::array();
  for (const auto& s : rep.samples) {
    samples.push_back({{"x", s.x},
                       {"t", s.t},
                       {"sigma", s.sigma},
                       {"K", s.K},
                       {"lhs", complex_json(s.lhs)},
                       {"rhs", complex_json(s.rhs)},
                       {"residual", number(s.residual)},
                       {"rel_residual", number(s.rel_residual)},
                       {"budget", number(s.budget)},
                       {"budget_multiplier", verify::kBudgetMultiplier},
                       {"within_budget", s.within_budget},
                       {"tail_bound", number(s.tail_bound)},
                       {"truncation_note", s.truncation_note}});
  }
  return json{{"samples", samples},
              {"window", rep.window},
              {"budget_note", "error budget x^(1/2-sigma) + x^(1/2) tau^-1 max(x^eps, log^(2K+2) x), "
                              "eps = 1/10; the 3x multiplier is a calibration, the O-constants "
                              "being unspecified"}};
}

json arith_report(const arith::ArithTable& table, const arith::PrimeSieve& sieve, int K, double T) {
  std::vector<double> xs;
  for (double x = 1.0e4; x <= static_cast<double>(table.n_max()) * (1 + 1e-12); x *= 10) xs.push_back(x);
  if (xs.empty()) xs.push_back(static_cast<double>(table.n_max()));

  json skk = json::array();
  for (int k = 1; k <= std::min(table.j_max(), 3); ++k) {
    for (double x : xs) {
      const double e = arith::S_sum(table, k, k, x);
      const double m = arith::theory_S_kk(k, x);
      skk.push_back({{"k", k}, {"x", x}, {"empirical", e}, {"main_term", m}, {"deviation", std::abs(e / m - 1)}});
    }
  }
  json pls = json::array();
  for (auto [u, v] : {std::pair{2, 1}, {2, 2}, {3, 1}, {4, 2}}) {
    for (double x : xs) {
      if (x > static_cast<double>(sieve.limit())) continue;
      const auto r = arith::prime_log_sum(sieve, u, v, x);
      pls.push_back({{"u", u}, {"v", v}, {"x", x}, {"empirical", r.empirical}, {"main_term", r.main_term},
                     {"deviation", std::abs(r.empirical / r.main_term - 1)}});
    }
  }
  json atot = json::array();
  const int k_eff = std::min(K, table.j_max());
  for (double x : xs) {
    const double e = arith::A_total(table, k_eff, x, T);
    const double m = arith::theory_A_total(k_eff, x, T);
    atot.push_back({{"x", x}, {"empirical", e}, {"main_term", m}, {"ratio", e / m}});
  }
  json psi = json::array();
  const double X = std::floor(static_cast<double>(sieve.limit()) / 2);
  for (double h : {10.0, 100.0}) {
    if (X <= h) continue;
    const auto r = arith::psi_variance(sieve, X, h);
    psi.push_back({{"X", r.X}, {"h", r.h}, {"integral", r.integral_value},
                   {"reference", r.reference_value}, {"ratio", number(r.ratio)}});
  }
  return json{{"n_max", table.n_max()}, {"j_max", table.j_max()}, {"K", k_eff}, {"T", T},
              {"S_kk", skk}, {"prime_log_sum", pls}, {"A_total", atot}, {"psi_variance", psi}};
}

stats::NormalizedFormFactor ah_form_factor(const stats::AHProcessSpec& spec,
                                           const std::vector<double>& points,
                                           const std::vector<double>& alphas, double raw_window) {
  const double ell = std::log(spec.start_height / (2.0 * pi));
  return stats::form_factor_normalized(points, alphas, ell, raw_window * ell / (2.0 * pi));
}

std::vector<verify::SampleSpec> desk_samples(int K) {
  std::vector<verify::SampleSpec> out;
  for (double x : {1.0, 10.0, 100.0}) {
    for (double t : {50.0, 200.0, 1000.0}) out.push_back({x, t, 1.5, K});
  }
  return out;
}

std::vector<fs::path> run_pipeline(const std::string& name, const RunConfig& cfg, const fs::path& out_dir) {
  validate(cfg);
  set_worker_count(cfg.threads);
  std::vector<fs::path> written;
  auto emit = [&](const std::string& file, const std::string& text) {
    written.push_back(out_dir / file);
    write_file(written.back(), text);
  };

  if (name == "fig1") {
    if (cfg.alpha.stop > 1.0) throw config_error("fig1: alpha_stop must be <= 1 for the theory curves");
    const auto alphas = stats::alpha_grid(cfg.alpha.start, cfg.alpha.stop, cfg.alpha.step);
    const auto xi = cached_zeros(cfg, zeros::Kind::xi, cfg.t_max);
    const auto xip = cached_zeros(cfg, zeros::Kind::xi_prime, cfg.t_max);
    const auto F = stats::form_factor(xi, cfg.t_max, alphas, cfg.window, cfg.K);
    const auto F1 = stats::form_factor(xip, cfg.t_max, alphas, cfg.window, cfg.K);
    std::string s = "alpha,empirical_F,empirical_F1,theory_f1,theory_montgomery,sine_ref\n";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      s += format_number(alphas[i]) + "," + format_number(F.empirical[i]) + "," +
           format_number(F1.empirical[i]) + "," + format_number(F1.theory_f1[i]) + "," +
           format_number(F1.theory_montgomery[i]) + "," + format_number(F1.sine_ref[i]) + "\n";
    }
    emit("fig1.csv", s);
  } else if (name == "fig2") {
    stats::AHProcessSpec spec;
    spec.count = cfg.ah_count;
    spec.seed = cfg.seed;
    const auto points = stats::ah_normalized(spec);
    const double stop = std::max(cfg.alpha.stop, 3.0);
    const auto alphas = stats::alpha_grid(0.0, stop, cfg.alpha.step);
    emit("fig2.csv", ah_curve_csv(ah_form_factor(spec, points, alphas, cfg.window)));
    std::string sp = "alpha\n";
    for (double a : stats::ah_spikes(0.0, stop)) sp += format_number(a) + "\n";
    emit("fig2_spikes.csv", sp);
  } else if (name == "fig3") {
    const auto xi = cached_zeros(cfg, zeros::Kind::xi, cfg.t_max);
    const auto xip = cached_zeros(cfg, zeros::Kind::xi_prime, cfg.t_max);
    emit("fig3.csv", interlacing_csv(zeros::interlacing_report(xi, xip)));
  } else if (name == "arith-report") {
    const auto table = cached_table(cfg, cfg.n_max, cfg.j_max);
    const arith::PrimeSieve sieve(cfg.n_max);
    emit("arith_report.json", arith_report(table, sieve, cfg.K, cfg.t_max).dump(2) + "\n");
  } else if (name == "explicit-report") {
    const auto samples = desk_samples(cfg.ef_K);
    double t_hi = 0.0;
    for (const auto& s : samples) t_hi = std::max(t_hi, std::abs(s.t) + cfg.ef_window);
    const auto xip = cached_zeros(cfg, zeros::Kind::xi_prime, t_hi);
    const auto table = arith::build_tables(100, std::max(1, cfg.ef_K), cfg.memory_budget);
    const auto rep = verify::ef_report(samples, xip, table, cfg.ef_window);
    emit("explicit_report.json", explicit_report_json(rep).dump(2) + "\n");
  } else {
    throw config_error("unknown pipeline '" + name + "'");
  }
  return written;
}

}  // namespace xiprime::app
