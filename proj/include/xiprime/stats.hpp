#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "xiprime/zeros.hpp"

namespace xiprime::stats {

// w(u) = 4 / (4 + u^2)
inline double pair_weight(double u) { return 4.0 / (4.0 + u * u); }

struct FormFactorCurve {
  double T = 0.0;
  std::vector<double> alphas;
  std::vector<double> empirical;
  std::vector<double> theory_f1;
  std::vector<double> theory_montgomery;
  std::vector<double> sine_ref;
  int K = 8;
  double window = 200.0;
  // Upper bound, from the mean zero density, on the weight of the pairs with
  // |gamma - gamma'| > window; the maximum over the alpha grid.
  double neglected_weight_bound = 0.0;
  std::size_t n_zeros = 0;
};

// alpha grid start, start + step, ..., up to stop (inclusive within 1e-9 step).
std::vector<double> alpha_grid(double start, double stop, double step);

// N^{-1} sum over pairs of zeros <= T within the window of
// cos(alpha log T (gamma - gamma')) w(gamma - gamma'), diagonal included.
FormFactorCurve form_factor(const zeros::ZeroSet& zs, double T, const std::vector<double>& alphas,
                            double window = 200.0, int K = 8);

struct NormalizedFormFactor {
  std::vector<double> alphas;
  std::vector<double> empirical;
  double window = 0.0;
  double neglected_weight_bound = 0.0;
};
// The same estimator on ordinates already rescaled to unit mean spacing:
// phase 2 pi alpha (x - x') and weight w(2 pi (x - x') / ell).
NormalizedFormFactor form_factor_normalized(const std::vector<double>& points,
                                            const std::vector<double>& alphas, double ell,
                                            double window);

double theory_F1(double alpha, double T, int K);
double theory_F_montgomery(double alpha, double T);
double sine_kernel_reference(double alpha);

// (gamma / 2 pi) (log(gamma / 2 pi) - 1), the smooth zero count up to a
// constant, so that consecutive differences average 1.
double normalize_ordinate(double gamma);
// Inverse of normalize_ordinate on gamma > 2 pi.
double denormalize_ordinate(double x);

struct GapStats {
  std::vector<double> normalized_gaps;
  double mean = 0.0;
  std::map<double, double> fraction_below;
};

inline const std::vector<double> kDefaultGapThresholds = {0.5, 0.75, 0.91, 0.999, 1.0};

GapStats normalize_gaps(const zeros::ZeroSet& zs, const std::vector<double>& extra_thresholds = {});

struct HistogramBin {
  double lo;
  double hi;
  std::size_t count;
};
std::vector<HistogramBin> gap_histogram(const GapStats& g, double bin_width, double max_gap);

struct AHProcessSpec {
  std::map<double, double> gap_probabilities = {{0.5, 0.297}, {1.0, 0.405}, {1.5, 0.298}};
  std::size_t count = 100000;
  std::uint64_t seed = 1;
  double start_height = 1.0e5;
};

void validate(const AHProcessSpec& spec);
// Normalized ordinates: start at normalize_ordinate(start_height) and add
// independent spacings drawn from gap_probabilities.
std::vector<double> ah_normalized(const AHProcessSpec& spec);
// The same points mapped back to raw ordinates.
zeros::ZeroSet ah_generate(const AHProcessSpec& spec);

// Distance from alpha to the nearest even integer: the period-2 extension of
// |alpha| on [-1, 1]. Delta components are reported by ah_spikes.
double ah_theory_F(double alpha);
std::vector<double> ah_spikes(double lo, double hi);

}  // namespace xiprime::stats
