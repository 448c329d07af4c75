#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xiprime/arith.hpp"
#include "xiprime/stats.hpp"
#include "xiprime/verify.hpp"
#include "xiprime/zeros.hpp"

namespace xiprime::app {

using json = nlohmann::ordered_json;

struct AlphaGridSpec {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.01;
};

struct RunConfig {
  double t_max = 1.0e5;
  std::uint64_t n_max = 1000000;
  int K = 8;
  int j_max = 8;
  double window = 200.0;
  AlphaGridSpec alpha;
  std::filesystem::path cache_dir = "xiprime-cache";
  std::uint64_t seed = 1;
  std::size_t memory_budget = arith::kDefaultMemoryBudget;
  unsigned threads = 0;
  std::size_t ah_count = 100000;
  int ef_K = 5;
  double ef_window = verify::kMinWindow;
};

// Keys accepted in config files and their command-line spellings.
struct SettingKey {
  const char* key;
  const char* flag;
  const char* help;
};
const std::vector<SettingKey>& setting_keys();

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
// "key = value" lines; '#' starts a comment.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);
// XIPRIME_CACHE, when set, replaces cache_dir.
void apply_environment(RunConfig& cfg);
void validate(const RunConfig& cfg);

// Zero sets and tables are cached under cfg.cache_dir keyed by their parameters.
zeros::ZeroSet cached_zeros(const RunConfig& cfg, zeros::Kind kind, double t_max);
arith::ArithTable cached_table(const RunConfig& cfg, std::uint64_t n_max, int j_max);

// Reads a zero file; without an explicit kind the "# kind=" header is used.
zeros::ZeroSet load_zero_file(const std::filesystem::path& path,
                              std::optional<zeros::Kind> kind = std::nullopt);

std::string format_number(double v);
std::string form_factor_csv(const stats::FormFactorCurve& f);
std::string interlacing_csv(const zeros::InterlacingReport& r);
std::string zprime_csv(const std::vector<zeros::ZprimeOffset>& rows);
std::string histogram_csv(const std::vector<stats::HistogramBin>& bins);
std::string ah_curve_csv(const stats::NormalizedFormFactor& f);

json interlacing_summary(const zeros::InterlacingReport& r);
json gap_report(const stats::GapStats& g);
json explicit_report_json(const verify::ExplicitFormulaReport& rep);
json arith_report(const arith::ArithTable& table, const arith::PrimeSieve& sieve, int K, double T);

// AH curve on [0, alpha_stop] at the process height, window given in raw units.
stats::NormalizedFormFactor ah_form_factor(const stats::AHProcessSpec& spec,
                                           const std::vector<double>& points,
                                           const std::vector<double>& alphas, double raw_window);

std::vector<verify::SampleSpec> desk_samples(int K);

// Writes text atomically (temporary file, then rename).
void write_file(const std::filesystem::path& path, const std::string& text);

inline const std::vector<std::string> kPipelines = {"fig1", "fig2", "fig3", "arith-report",
                                                    "explicit-report"};

// Runs one named pipeline and returns the artifact paths written to out_dir.
std::vector<std::filesystem::path> run_pipeline(const std::string& name, const RunConfig& cfg,
                                                const std::filesystem::path& out_dir);

}  // namespace xiprime::app
