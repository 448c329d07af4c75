#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xiprime/app.hpp"
#include "xiprime/error.hpp"
#include "xiprime/parallel.hpp"

namespace fs = std::filesystem;
using namespace xiprime;
using app::json;

namespace {

const char* category_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::config:
      return "config";
    case ErrorKind::numeric:
      return "numeric";
    case ErrorKind::io:
      return "io";
  }
  return "internal";
}

int report_error(const std::string& category, const std::string& code, const std::string& msg,
                 int status) {
  json j{{"error", {{"category", category}, {"code", code}, {"message", msg}}}};
  std::cerr << j.dump() << "\n";
  return status;
}

void emit_json(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    app::write_file(out, j.dump(2) + "\n");
  }
}

void emit_text(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    app::write_file(out, text);
  }
}

std::optional<zeros::Kind> kind_option(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return zeros::parse_kind(s);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw config_error("not a number list: '" + s + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Zeros of Xi and Xi', pair correlation form factors and explicit-formula checks"};
  cli.require_subcommand(1);
  unsigned threads = 0;
  cli.add_option("--threads", threads, "worker threads (0 = hardware)");

  // arith
  auto* arith_cmd = cli.add_subcommand("arith", "Lambda_j / alpha_k tables and the arithmetic report");
  std::uint64_t a_n_max = 1000000;
  int a_j_max = 3, a_K = 3;
  double a_T = 1.0e5;
  std::string a_cache, a_out;
  arith_cmd->add_option("--n-max", a_n_max, "table extent")->capture_default_str();
  arith_cmd->add_option("--j-max", a_j_max, "highest Lambda_j row")->capture_default_str();
  arith_cmd->add_option("--K", a_K, "truncation for A(x)")->capture_default_str();
  arith_cmd->add_option("--T", a_T, "height entering ell = log(T/2pi)/2")->capture_default_str();
  arith_cmd->add_option("--table-cache", a_cache, "binary table cache");
  arith_cmd->add_option("--out", a_out, "JSON report (stdout when omitted)");

  // zeros
  auto* zeros_cmd = cli.add_subcommand("zeros", "Zero finding and zero-set diagnostics");
  zeros_cmd->require_subcommand(0, 1);
  std::string z_kind = "xi", z_out;
  double z_t_min = 0.0, z_t_max = 0.0;
  zeros::GridPolicy z_policy;
  zeros_cmd->add_option("--kind", z_kind, "xi | xi-prime | z-prime")->capture_default_str();
  zeros_cmd->add_option("--t-min", z_t_min, "scan start")->capture_default_str();
  zeros_cmd->add_option("--t-max", z_t_max, "scan end");
  zeros_cmd->add_option("--grid-c", z_policy.c, "grid step c / log t")->capture_default_str();
  zeros_cmd->add_option("--tolerance", z_policy.tolerance, "bisection width")->capture_default_str();
  zeros_cmd->add_option("--out", z_out, "zero file");

  auto* audit_cmd = zeros_cmd->add_subcommand("audit", "Count against the smooth count, N1 - N");
  std::string au_zeros, au_other, au_kind, au_out;
  audit_cmd->add_option("--zeros", au_zeros, "zero file")->required();
  audit_cmd->add_option("--kind", au_kind, "override the file's kind");
  audit_cmd->add_option("--other", au_other, "second zero file (xi vs xi-prime)");
  audit_cmd->add_option("--out", au_out, "JSON output");

  auto* inter_cmd = zeros_cmd->add_subcommand("interlace", "Xi' zeros inside Xi gaps");
  std::string in_xi, in_xip, in_out, in_summary;
  inter_cmd->add_option("--xi", in_xi, "Xi zero file")->required();
  inter_cmd->add_option("--xi-prime", in_xip, "Xi' zero file")->required();
  inter_cmd->add_option("--out", in_out, "per-gap CSV");
  inter_cmd->add_option("--summary", in_summary, "summary JSON (stdout when omitted)");

  auto* cmp_cmd = zeros_cmd->add_subcommand("compare-zprime", "Offsets between Xi' and Z' zeros");
  std::string cz_xip, cz_zp, cz_out;
  double cz_lo = 100.0, cz_hi = 1000.0;
  cmp_cmd->add_option("--xi-prime", cz_xip, "Xi' zero file")->required();
  cmp_cmd->add_option("--z-prime", cz_zp, "Z' zero file")->required();
  cmp_cmd->add_option("--t-lo", cz_lo)->capture_default_str();
  cmp_cmd->add_option("--t-hi", cz_hi)->capture_default_str();
  cmp_cmd->add_option("--out", cz_out, "CSV (stdout when omitted)");

  // formfactor
  auto* ff_cmd = cli.add_subcommand("formfactor", "Empirical form factor with theory columns");
  std::string ff_zeros, ff_out;
  double ff_T = 0.0, ff_window = 200.0;
  int ff_K = 8;
  app::AlphaGridSpec ff_alpha;
  ff_cmd->add_option("--zeros", ff_zeros, "zero file")->required();
  ff_cmd->add_option("--T", ff_T, "height (defaults to the file's t_max)");
  ff_cmd->add_option("--K", ff_K)->capture_default_str();
  ff_cmd->add_option("--window", ff_window)->capture_default_str();
  ff_cmd->add_option("--alpha-start", ff_alpha.start)->capture_default_str();
  ff_cmd->add_option("--alpha-stop", ff_alpha.stop)->capture_default_str();
  ff_cmd->add_option("--alpha-step", ff_alpha.step)->capture_default_str();
  ff_cmd->add_option("--out", ff_out, "CSV (stdout when omitted)");

  // gaps
  auto* gaps_cmd = cli.add_subcommand("gaps", "Normalized gap fractions and histogram");
  std::string g_zeros, g_thresholds, g_out, g_hist;
  double g_bin = 0.05, g_max = 4.0;
  gaps_cmd->add_option("--zeros", g_zeros, "zero file")->required();
  gaps_cmd->add_option("--thresholds", g_thresholds, "extra thresholds, comma separated");
  gaps_cmd->add_option("--out", g_out, "JSON (stdout when omitted)");
  gaps_cmd->add_option("--hist-out", g_hist, "histogram CSV");
  gaps_cmd->add_option("--bin-width", g_bin)->capture_default_str();
  gaps_cmd->add_option("--max-gap", g_max)->capture_default_str();

  // simulate ah
  auto* sim_cmd = cli.add_subcommand("simulate", "Point process simulations");
  sim_cmd->require_subcommand(1);
  auto* ah_cmd = sim_cmd->add_subcommand("ah", "Alternative Hypothesis process");
  stats::AHProcessSpec ah;
  std::string ah_out, ah_ff, ah_probs;
  double ah_stop = 3.0, ah_step = 0.01, ah_window = 200.0;
  ah_cmd->add_option("--count", ah.count)->capture_default_str();
  ah_cmd->add_option("--seed", ah.seed)->capture_default_str();
  ah_cmd->add_option("--start-height", ah.start_height)->capture_default_str();
  ah_cmd->add_option("--gaps", ah_probs, "gap:probability list, e.g. 0.5:0.297,1:0.405,1.5:0.298");
  ah_cmd->add_option("--out", ah_out, "zero file of raw ordinates");
  ah_cmd->add_option("--ff-out", ah_ff, "form factor CSV");
  ah_cmd->add_option("--alpha-stop", ah_stop)->capture_default_str();
  ah_cmd->add_option("--alpha-step", ah_step)->capture_default_str();
  ah_cmd->add_option("--window", ah_window, "pair window in raw units")->capture_default_str();

  // explicit
  auto* ef_cmd = cli.add_subcommand("explicit", "Explicit formula comparison");
  std::string ef_x = "10", ef_t = "50", ef_zeros, ef_kind = "xi-prime", ef_out, ef_tail = "analytic";
  double ef_sigma = 1.5, ef_window = verify::kMinWindow;
  int ef_K = 5;
  ef_cmd->add_option("--x", ef_x, "x values, comma separated")->capture_default_str();
  ef_cmd->add_option("--t", ef_t, "t values, comma separated")->capture_default_str();
  ef_cmd->add_option("--sigma", ef_sigma)->capture_default_str();
  ef_cmd->add_option("--K", ef_K)->capture_default_str();
  ef_cmd->add_option("--zeros", ef_zeros, "Xi' zero file")->required();
  ef_cmd->add_option("--kind", ef_kind, "kind of the zero file")->capture_default_str();
  ef_cmd->add_option("--window", ef_window)->capture_default_str();
  ef_cmd->add_option("--tail", ef_tail, "analytic | direct")->capture_default_str();
  ef_cmd->add_option("--out", ef_out, "JSON (stdout when omitted)");

  // run
  auto* run_cmd = cli.add_subcommand("run", "Named pipelines: fig1 fig2 fig3 arith-report explicit-report");
  std::string run_name, run_config, run_out_dir = ".";
  run_cmd->add_option("name", run_name, "pipeline")->required()->check(CLI::IsMember(app::kPipelines));
  run_cmd->add_option("--config", run_config, "key = value file");
  run_cmd->add_option("--out-dir", run_out_dir, "artifact directory")->capture_default_str();
  std::map<std::string, std::string> run_flags;
  for (const auto& k : app::setting_keys()) {
    if (std::string(k.key) == "threads") continue;
    run_cmd->add_option_function<std::string>(
        k.flag, [&run_flags, key = std::string(k.key)](const std::string& v) { run_flags[key] = v; },
        k.help);
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("config", "usage", e.what(), 2);
  }

  try {
    set_worker_count(threads);

    if (*arith_cmd) {
      if (a_K > a_j_max) throw config_error("K exceeds j_max");
      const auto table = a_cache.empty() ? arith::build_tables(a_n_max, a_j_max)
                                         : arith::load_or_build(a_cache, a_n_max, a_j_max);
      const arith::PrimeSieve sieve(a_n_max);
      emit_json(app::arith_report(table, sieve, a_K, a_T), a_out);
    } else if (*zeros_cmd) {
      if (*audit_cmd) {
        const auto zs = app::load_zero_file(au_zeros, kind_option(au_kind));
        std::optional<zeros::ZeroSet> other;
        if (!au_other.empty()) other = app::load_zero_file(au_other);
        const auto a = zeros::count_audit(zs, other ? &*other : nullptr);
        json j{{"kind", zeros::kind_name(zs.kind)}, {"t_max", zs.t_max}, {"counted", a.counted},
               {"smooth", a.smooth}};
        j["n1_minus_n"] = a.n1_minus_n ? json(*a.n1_minus_n) : json(nullptr);
        emit_json(j, au_out);
      } else if (*inter_cmd) {
        const auto r = zeros::interlacing_report(app::load_zero_file(in_xi, zeros::Kind::xi),
                                                 app::load_zero_file(in_xip, zeros::Kind::xi_prime));
        if (!in_out.empty()) app::write_file(in_out, app::interlacing_csv(r));
        emit_json(app::interlacing_summary(r), in_summary);
      } else if (*cmp_cmd) {
        const auto rows =
            zeros::compare_zprime(app::load_zero_file(cz_xip, zeros::Kind::xi_prime),
                                  app::load_zero_file(cz_zp, zeros::Kind::z_prime), cz_lo, cz_hi);
        emit_text(app::zprime_csv(rows), cz_out);
      } else {
        if (!(z_t_max > z_t_min)) throw config_error("zeros: --t-max must exceed --t-min");
        if (z_out.empty()) throw config_error("zeros: --out is required");
        const auto zs = zeros::find_zeros(zeros::parse_kind(z_kind), z_t_min, z_t_max, z_policy);
        zeros::export_zeros(zs, z_out);
        for (const auto& w : zs.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << json{{"kind", zeros::kind_name(zs.kind)},
                          {"count", zs.ordinates.size()},
                          {"t_max", zs.t_max},
                          {"warnings", zs.warnings}}
                         .dump()
                  << "\n";
      }
    } else if (*ff_cmd) {
      const auto zs = app::load_zero_file(ff_zeros);
      const double T = ff_T > 0.0 ? ff_T : zs.t_max;
      const auto f = stats::form_factor(zs, T, stats::alpha_grid(ff_alpha.start, ff_alpha.stop, ff_alpha.step),
                                        ff_window, ff_K);
      std::cerr << "neglected_weight_bound " << app::format_number(f.neglected_weight_bound) << "\n";
      emit_text(app::form_factor_csv(f), ff_out);
    } else if (*gaps_cmd) {
      const auto g = stats::normalize_gaps(app::load_zero_file(g_zeros),
                                           g_thresholds.empty() ? std::vector<double>{}
                                                                : parse_list(g_thresholds));
      if (!g_hist.empty()) app::write_file(g_hist, app::histogram_csv(stats::gap_histogram(g, g_bin, g_max)));
      emit_json(app::gap_report(g), g_out);
    } else if (*sim_cmd) {
      if (!ah_probs.empty()) {
        ah.gap_probabilities.clear();
        std::stringstream ss(ah_probs);
        for (std::string item; std::getline(ss, item, ',');) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) throw config_error("--gaps: expected gap:probability");
          const auto gp = parse_list(item.substr(0, colon) + "," + item.substr(colon + 1));
          ah.gap_probabilities[gp[0]] = gp[1];
        }
      }
      const auto points = stats::ah_normalized(ah);
      if (!ah_out.empty()) zeros::export_zeros(stats::ah_generate(ah), ah_out);
      if (!ah_ff.empty()) {
        const auto f = app::ah_form_factor(ah, points, stats::alpha_grid(0.0, ah_stop, ah_step), ah_window);
        app::write_file(ah_ff, app::ah_curve_csv(f));
      }
      std::map<double, std::size_t> counts;
      for (std::size_t i = 1; i < points.size(); ++i) {
        counts[std::round(2.0 * (points[i] - points[i - 1])) / 2.0]++;
      }
      json hist = json::array();
      for (const auto& [gap, n] : counts) hist.push_back({{"gap", gap}, {"count", n}});
      std::cout << json{{"count", points.size()}, {"seed", ah.seed}, {"gaps", hist}}.dump(2) << "\n";
    } else if (*ef_cmd) {
      verify::TailMode mode;
      if (ef_tail == "analytic") {
        mode = verify::TailMode::analytic;
      } else if (ef_tail == "direct") {
        mode = verify::TailMode::direct;
      } else {
        throw config_error("--tail must be analytic or direct");
      }
      const auto xs = parse_list(ef_x);
      const auto ts = parse_list(ef_t);
      std::vector<verify::SampleSpec> samples;
      double x_hi = 1.0;
      for (double x : xs) {
        x_hi = std::max(x_hi, x);
        for (double t : ts) samples.push_back({x, t, ef_sigma, ef_K});
      }
      const auto xip = app::load_zero_file(ef_zeros, zeros::parse_kind(ef_kind));
      const auto n_max = static_cast<std::uint64_t>(std::max(2.0, std::floor(x_hi)));
      const auto table = mode == verify::TailMode::direct
                             ? arith::build_tables(std::max<std::uint64_t>(n_max, 1000000), std::max(1, ef_K))
                             : arith::build_tables(n_max, std::max(1, ef_K));
      emit_json(app::explicit_report_json(verify::ef_report(samples, xip, table, ef_window, mode)), ef_out);
    } else if (*run_cmd) {
      app::RunConfig cfg;
      if (!run_config.empty()) app::apply_config_file(cfg, run_config);
      app::apply_environment(cfg);
      for (const auto& [key, value] : run_flags) app::apply_setting(cfg, key, value);
      if (threads) cfg.threads = threads;
      for (const auto& p : app::run_pipeline(run_name, cfg, run_out_dir)) {
        std::cout << p.string() << "\n";
      }
    }
  } catch (const Error& e) {
    return report_error(category_name(e.kind()), e.code(), e.what(), exit_code(e.kind()));
  } catch (const fs::filesystem_error& e) {
    return report_error("io", "io", e.what(), 4);
  } catch (const std::bad_alloc&) {
    return report_error("numeric", "capacity", "out of memory", 3);
  } catch (const std::exception& e) {
    return report_error("internal", "internal", e.what(), 1);
  }
  return 0;
}
