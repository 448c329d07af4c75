#include "xiprime/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "xiprime/error.hpp"
#include "xiprime/parallel.hpp"

namespace xiprime::stats {

namespace {

using std::numbers::pi;

constexpr std::size_t kPairBlock = 1024;  // zeros per reduction block
constexpr std::size_t kBatch = 256;       // pairs per rotation batch

}  // namespace

std::vector<double> alpha_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw config_error("alpha grid: need step > 0 and stop >= start");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

namespace {

// Sum over ordered pairs (i, j), |x_i - x_j| <= window, of
// cos(a * phase_scale * (x_i - x_j)) w(weight_scale * (x_i - x_j)), divided by
// the number of points, for each a in abs_alphas (ascending, nonnegative).
std::vector<double> pair_sum(const std::vector<double>& x, const std::vector<double>& abs_alphas,
                             double window, double phase_scale, double weight_scale) {
  const std::size_t n = x.size();
  const std::size_t M = abs_alphas.size();
  bool uniform = M >= 2;
  const double h = M >= 2 ? abs_alphas[1] - abs_alphas[0] : 0.0;
  for (std::size_t m = 2; uniform && m < M; ++m) {
    const double expect = abs_alphas[0] + static_cast<double>(m) * h;
    if (std::abs(abs_alphas[m] - expect) > 1e-12 * std::max(1.0, std::abs(expect))) uniform = false;
  }

  const std::size_t n_blocks = (n + kPairBlock - 1) / kPairBlock;
  std::vector<std::vector<double>> partial(n_blocks);
  parallel_blocks(n_blocks, [&](std::size_t blk) {
    std::vector<double> acc(M, 0.0);
    std::vector<double> c(kBatch), s(kBatch), cr(kBatch), sr(kBatch), w(kBatch);
    std::size_t fill = 0;
    auto flush = [&] {
      if (uniform) {
        for (std::size_t m = 0; m < M; ++m) {
          double sum = 0.0;
          for (std::size_t p = 0; p < fill; ++p) sum += w[p] * c[p];
          acc[m] += sum;
          for (std::size_t p = 0; p < fill; ++p) {
            const double cn = c[p] * cr[p] - s[p] * sr[p];
            const double sn = c[p] * sr[p] + s[p] * cr[p];
            c[p] = cn;
            s[p] = sn;
          }
        }
      } else {
        for (std::size_t m = 0; m < M; ++m) {
          double sum = 0.0;
          for (std::size_t p = 0; p < fill; ++p) sum += w[p] * std::cos(abs_alphas[m] * c[p]);
          acc[m] += sum;
        }
      }
      fill = 0;
    };
    const std::size_t i_end = std::min(n, (blk + 1) * kPairBlock);
    for (std::size_t i = blk * kPairBlock; i < i_end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = x[j] - x[i];
        if (d > window) break;
        const double ph = phase_scale * d;
        // Each unordered pair stands for (i, j) and (j, i).
        w[fill] = 2.0 * pair_weight(weight_scale * d);
        if (uniform) {
          c[fill] = std::cos(abs_alphas[0] * ph);
          s[fill] = std::sin(abs_alphas[0] * ph);
          cr[fill] = std::cos(h * ph);
          sr[fill] = std::sin(h * ph);
        } else {
          c[fill] = ph;
        }
        if (++fill == kBatch) flush();
      }
    }
    if (fill > 0) flush();
    partial[blk] = std::move(acc);
  });

  std::vector<double> out(M);
  for (std::size_t m = 0; m < M; ++m) {
    CompensatedSum<double> sum;
    sum.add(static_cast<double>(n));  // diagonal, w(0) = 1
    for (const auto& p : partial) sum.add(p[m]);
    out[m] = sum.value() / static_cast<double>(n);
  }
  return out;
}

// Evaluates on the distinct |alpha| values so that alpha and -alpha receive
// bitwise identical results.
std::vector<double> symmetric_pair_sum(const std::vector<double>& x, const std::vector<double>& alphas,
                                       double window, double phase_scale, double weight_scale) {
  std::vector<double> abs_alphas;
  abs_alphas.reserve(alphas.size());
  for (double a : alphas) abs_alphas.push_back(std::abs(a));
  std::sort(abs_alphas.begin(), abs_alphas.end());
  abs_alphas.erase(std::unique(abs_alphas.begin(), abs_alphas.end()), abs_alphas.end());
  const auto values = pair_sum(x, abs_alphas, window, phase_scale, weight_scale);
  std::vector<double> out;
  out.reserve(alphas.size());
  for (double a : alphas) {
    const auto it = std::lower_bound(abs_alphas.begin(), abs_alphas.end(), std::abs(a));
    out.push_back(values[static_cast<std::size_t>(it - abs_alphas.begin())]);
  }
  return out;
}

// Weight of the pairs beyond the window for points of mean density rho,
// w(a u) weights and phase scale L: 2 rho min(int_window^inf w(a u) du,
// 2 w(a window) / (alpha L)), maximised over the grid.
double tail_bound(const std::vector<double>& alphas, double rho, double a, double window, double L) {
  const double flat = 2.0 * rho * (2.0 / a) * (pi / 2.0 - std::atan(a * window / 2.0));
  double worst = 0.0;
  for (double alpha : alphas) {
    double b = flat;
    if (alpha != 0.0) b = std::min(b, 2.0 * rho * 2.0 * pair_weight(a * window) / (std::abs(alpha) * L));
    worst = std::max(worst, b);
  }
  return worst;
}

}  // namespace

FormFactorCurve form_factor(const zeros::ZeroSet& zs, double T, const std::vector<double>& alphas,
                            double window, int K) {
  if (!(window > 0.0)) throw precondition_error("form_factor: window must be positive");
  if (!(T > 2.0 * pi)) throw domain_error("form_factor: T must exceed 2 pi");
  if (zs.t_max < T) {
    throw precondition_error("form_factor: zero set complete only to " + std::to_string(zs.t_max) +
                             " < T = " + std::to_string(T));
  }
  if (K < 1) throw config_error("form_factor: K must be >= 1");
  std::vector<double> x(zs.ordinates.begin(), zs.ordinates.begin() + static_cast<long>(zs.count_up_to(T)));
  if (x.empty()) throw precondition_error("form_factor: no zeros up to T");

  FormFactorCurve f;
  f.T = T;
  f.alphas = alphas;
  f.K = K;
  f.window = window;
  f.n_zeros = x.size();
  const double logT = std::log(T);
  f.empirical = symmetric_pair_sum(x, alphas, window, logT, 1.0);
  for (double a : alphas) {
    f.theory_f1.push_back(theory_F1(a, T, K));
    f.theory_montgomery.push_back(theory_F_montgomery(a, T));
    f.sine_ref.push_back(sine_kernel_reference(a));
  }
  const double rho = std::log(T / (2.0 * pi)) / (2.0 * pi);
  f.neglected_weight_bound = tail_bound(alphas, rho, 1.0, window, logT);
  // Compared with the density term rho * int w = log(T / 2 pi), the size of
  // the alpha = 0 value of a complete set.
  if (f.neglected_weight_bound > 0.01 * 2.0 * pi * rho) {
    throw precondition_error("form_factor: window " + std::to_string(window) +
                             " too small, neglected pair weight up to " +
                             std::to_string(f.neglected_weight_bound));
  }
  return f;
}

NormalizedFormFactor form_factor_normalized(const std::vector<double>& points,
                                            const std::vector<double>& alphas, double ell,
                                            double window) {
  if (!(window > 0.0) || !(ell > 0.0)) throw precondition_error("form_factor_normalized: need window, ell > 0");
  if (points.empty()) throw precondition_error("form_factor_normalized: empty point set");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i] > points[i - 1])) throw precondition_error("form_factor_normalized: points not ascending");
  }
  NormalizedFormFactor f;
  f.alphas = alphas;
  f.window = window;
  const double a = 2.0 * pi / ell;
  f.empirical = symmetric_pair_sum(points, alphas, window, 2.0 * pi, a);
  f.neglected_weight_bound = tail_bound(alphas, 1.0, a, window, 2.0 * pi);
  return f;
}

double theory_F1(double alpha, double T, int K) {
  const double a = std::abs(alpha);
  double series = 0.0;
  double coef = 0.5;  // (k-1)!/(2k)! at k = 1
  const double y = 2.0 * a;
  double pw = y * y * y;
  for (int k = 1; k <= K; ++k) {
    series += coef * pw;
    coef *= static_cast<double>(k) / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    pw *= y * y;
  }
  return std::pow(T, -2.0 * a) * std::log(T) + a - 4.0 * a * a + series;
}

double theory_F_montgomery(double alpha, double T) {
  const double a = std::abs(alpha);
  return std::pow(T, -2.0 * a) * std::log(T) + a;
}

double sine_kernel_reference(double alpha) { return std::min(std::abs(alpha), 1.0); }

double normalize_ordinate(double gamma) {
  const double y = gamma / (2.0 * pi);
  return y * (std::log(y) - 1.0);
}

double denormalize_ordinate(double x) {
  if (!(x > -1.0)) throw domain_error("denormalize_ordinate: value below the monotone range");
  // f(y) = y (log y - 1) - x is increasing and convex on y > 1.
  auto f = [x](double y) { return y * (std::log(y) - 1.0) - x; };
  double lo = 1.0;
  double hi = std::numbers::e;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  double y = hi;
  for (int it = 0; it < 200; ++it) {
    const double fy = f(y);
    if (fy == 0.0) break;
    if (fy > 0.0) hi = y; else lo = y;
    double next = y - fy / std::log(y);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-16 * y) {
      y = next;
      break;
    }
    y = next;
  }
  return 2.0 * pi * y;
}

GapStats normalize_gaps(const zeros::ZeroSet& zs, const std::vector<double>& extra_thresholds) {
  const auto& g = zs.ordinates;
  if (g.size() < 2) throw precondition_error("normalize_gaps: need at least two ordinates");
  if (!(g.front() > 2.0 * pi)) {
    throw domain_error("normalize_gaps: first ordinate below 2 pi, rescaling not monotone");
  }
  GapStats st;
  double prev = normalize_ordinate(g[0]);
  CompensatedSum<double> sum;
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double cur = normalize_ordinate(g[i]);
    const double gap = cur - prev;
    if (!(gap > 0.0)) throw domain_error("normalize_gaps: ordinates not strictly ascending");
    st.normalized_gaps.push_back(gap);
    sum.add(gap);
    prev = cur;
  }
  st.mean = sum.value() / static_cast<double>(st.normalized_gaps.size());
  std::vector<double> thresholds = kDefaultGapThresholds;
  thresholds.insert(thresholds.end(), extra_thresholds.begin(), extra_thresholds.end());
  std::vector<double> sorted = st.normalized_gaps;
  std::sort(sorted.begin(), sorted.end());
  for (double t : thresholds) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    st.fraction_below[t] = static_cast<double>(below) / static_cast<double>(sorted.size());
  }
  return st;
}

std::vector<HistogramBin> gap_histogram(const GapStats& g, double bin_width, double max_gap) {
  if (!(bin_width > 0.0) || !(max_gap > 0.0)) throw config_error("gap_histogram: need positive bin width and range");
  const auto n_bins = static_cast<std::size_t>(std::ceil(max_gap / bin_width - 1e-9));
  std::vector<HistogramBin> bins;
  for (std::size_t i = 0; i < n_bins; ++i) {
    bins.push_back({static_cast<double>(i) * bin_width, static_cast<double>(i + 1) * bin_width, 0});
  }
  for (double v : g.normalized_gaps) {
    const auto b = static_cast<std::size_t>(std::floor(v / bin_width));
    if (b < n_bins) ++bins[b].count;
  }
  return bins;
}

void validate(const AHProcessSpec& spec) {
  if (spec.gap_probabilities.empty()) throw config_error("AH spec: no gap probabilities");
  double total = 0.0;
  for (const auto& [gap, p] : spec.gap_probabilities) {
    if (!(gap > 0.0) || std::abs(2.0 * gap - std::round(2.0 * gap)) > 1e-12) {
      throw config_error("AH spec: gap " + std::to_string(gap) + " is not a positive half-integer");
    }
    if (!(p >= 0.0)) throw config_error("AH spec: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw config_error("AH spec: probabilities sum to " + std::to_string(total));
  if (spec.count < 2) throw config_error("AH spec: count must be >= 2");
  if (!(spec.start_height > 2.0 * pi)) throw config_error("AH spec: start height must exceed 2 pi");
}

std::vector<double> ah_normalized(const AHProcessSpec& spec) {
  validate(spec);
  std::vector<double> gaps;
  std::vector<double> cdf;
  double acc = 0.0;
  for (const auto& [gap, p] : spec.gap_probabilities) {
    acc += p;
    gaps.push_back(gap);
    cdf.push_back(acc);
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<double> x;
  x.reserve(spec.count);
  double cur = normalize_ordinate(spec.start_height);
  x.push_back(cur);
  for (std::size_t i = 1; i < spec.count; ++i) {
    // 53 random bits; platform independent unlike the standard distributions.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    std::size_t k = 0;
    while (k + 1 < cdf.size() && u >= cdf[k]) ++k;
    cur += gaps[k];
    x.push_back(cur);
  }
  return x;
}

zeros::ZeroSet ah_generate(const AHProcessSpec& spec) {
  const auto x = ah_normalized(spec);
  zeros::ZeroSet zs;
  zs.kind = zeros::Kind::imported;
  zs.ordinates.reserve(x.size());
  for (double v : x) zs.ordinates.push_back(denormalize_ordinate(v));
  zs.t_max = zs.ordinates.back();
  zs.ordinate_tolerance = 0.0;
  zs.source = "ah:seed=" + std::to_string(spec.seed) + ":count=" + std::to_string(spec.count);
  return zs;
}

double ah_theory_F(double alpha) {
  return std::abs(alpha - 2.0 * std::round(alpha / 2.0));
}

std::vector<double> ah_spikes(double lo, double hi) {
  std::vector<double> out;
  for (double k = std::ceil(lo / 2.0); 2.0 * k <= hi; k += 1.0) out.push_back(2.0 * k);
  return out;
}

}  // namespace xiprime::stats
