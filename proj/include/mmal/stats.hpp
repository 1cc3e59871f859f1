#pragma once

// One-way ANOVA on grouped sample means and pooled-standard-deviation confidence intervals,
// with the Student t and Fisher F distributions computed from the regularized incomplete beta.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmal::stats {

/// Means of consecutive chunks of `group_size` observations.
inline std::vector<double> group_sample_means(std::span<const double> raw, std::size_t group_size) {
  if (group_size == 0) throw std::invalid_argument("group size must be positive");
  if (raw.size() % group_size != 0)
    throw std::invalid_argument(std::to_string(raw.size()) + " observations do not split into groups of " +
                                std::to_string(group_size));
  std::vector<double> means;
  means.reserve(raw.size() / group_size);
  for (std::size_t at = 0; at < raw.size(); at += group_size) {
    double sum = 0.0;
    for (std::size_t i = 0; i < group_size; ++i) sum += raw[at + i];
    means.push_back(sum / static_cast<double>(group_size));
  }
  return means;
}

struct Group {
  std::string name;
  std::vector<double> values;
};

using GroupedSamples = std::vector<Group>;

struct AnovaResult {
  double f_statistic = 0.0;
  std::size_t df_between = 0;
  std::size_t df_within = 0;
  std::vector<double> group_means;
  double grand_mean = 0.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  double ms_within = 0.0;
};

/// F = MS_between / MS_within. +inf when only the within-group variance vanishes, 0 when both do.
inline AnovaResult anova_oneway(const GroupedSamples& groups) {
  if (groups.size() < 2) throw std::invalid_argument("ANOVA needs at least two groups");
  AnovaResult r;
  std::size_t total = 0;
  double sum = 0.0;
  for (const auto& g : groups) {
    if (g.values.size() < 2) throw std::invalid_argument("group '" + g.name + "' needs at least two observations");
    double s = 0.0;
    for (double v : g.values) s += v;
    r.group_means.push_back(s / static_cast<double>(g.values.size()));
    sum += s;
    total += g.values.size();
  }
  r.grand_mean = sum / static_cast<double>(total);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double d = r.group_means[i] - r.grand_mean;
    r.ss_between += static_cast<double>(groups[i].values.size()) * d * d;
    for (double v : groups[i].values) r.ss_within += (v - r.group_means[i]) * (v - r.group_means[i]);
  }
  r.df_between = groups.size() - 1;
  r.df_within = total - groups.size();
  const double ms_between = r.ss_between / static_cast<double>(r.df_between);
  r.ms_within = r.ss_within / static_cast<double>(r.df_within);
  if (r.ms_within > 0.0)
    r.f_statistic = ms_between / r.ms_within;
  else
    r.f_statistic = ms_between > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return r;
}

// --- distributions ---------------------------------------------------------------------------

namespace detail {

// Continued fraction for the incomplete beta (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

/// Smallest x in [lo, hi] with cdf(x) >= p, by bisection; `hi` is grown until it brackets p.
template <class Cdf>
double invert_cdf(Cdf&& cdf, double p, double lo, double hi) {
  while (cdf(hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 400 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// I_x(a, b).
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta needs positive shape parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

inline double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
  const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
  return t >= 0.0 ? 1.0 - tail : tail;
}

/// Quantile of Student's t, accurate to about 1e-10 relative.
inline double student_t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile probability must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, df);
  return detail::invert_cdf([df](double t) { return student_t_cdf(t, df); }, p, 0.0, 1.0);
}

inline double f_cdf(double x, double df1, double df2) {
  if (x <= 0.0) return 0.0;
  return regularized_incomplete_beta(df1 / 2.0, df2 / 2.0, df1 * x / (df1 * x + df2));
}

inline double f_quantile(double p, double df1, double df2) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile probability must lie in (0, 1)");
  return detail::invert_cdf([=](double x) { return f_cdf(x, df1, df2); }, p, 0.0, 1.0);
}

// --- confidence intervals --------------------------------------------------------------------

struct ConfidenceInterval {
  double mean = 0.0;
  double half_width = 0.0;

  double lower() const { return mean - half_width; }
  double upper() const { return mean + half_width; }
};

/// mean_i +- t_{(1+confidence)/2, N-g} * s_pooled / sqrt(m), s_pooled = sqrt(MS_within).
inline std::vector<ConfidenceInterval> pooled_confidence_intervals(const GroupedSamples& groups, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
  if (groups.empty()) throw std::invalid_argument("no groups");
  const std::size_t m = groups.front().values.size();
  for (const auto& g : groups)
    if (g.values.size() != m) throw std::invalid_argument("pooled intervals need equal group sizes");

  const auto anova = anova_oneway(groups);
  const double s_pooled = std::sqrt(anova.ms_within);
  const double t = student_t_quantile((1.0 + confidence) / 2.0, static_cast<double>(anova.df_within));
  const double half = t * s_pooled / std::sqrt(static_cast<double>(m));

  std::vector<ConfidenceInterval> out;
  for (double mean : anova.group_means) out.push_back({mean, half});
  return out;
}

}  // namespace mmal::stats
