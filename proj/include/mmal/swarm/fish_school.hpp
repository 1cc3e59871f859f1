#pragma once

// Fish School Search operators: individual movement (with optional worsening acceptance),
// feeding (incremental or min-max normalised weights), collective-instinctive and
// collective-volitive movement, plus the step and acceptance schedules.
//
// The school always maximizes. Operators that consume random numbers come in two flavours:
// one that takes the draws explicitly and one that pulls them from an Rng.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmal/swarm/rng.hpp"
#include "mmal/swarm/search_space.hpp"

namespace mmal::swarm {

enum class FssVariant { Vanilla, Sar, NpssSar };

struct FssConfig {
  std::size_t school_size = 30;
  std::size_t max_iterations = 1000;
  double w_scale = 10000.0;
  /// Initial steps as fractions of the search-space width.
  double step_ind_initial_fraction = 0.2;
  double step_vol_initial_fraction = 0.2;
  FssVariant variant = FssVariant::Vanilla;
  double sar_alpha0 = 0.8;
  double sar_decay_rate = 0.007;
  std::uint64_t rng_seed = 0;
  double iuc_threshold = 1e-4;

  void validate() const {
    if (school_size == 0) throw std::invalid_argument("school size must be positive");
    if (max_iterations == 0) throw std::invalid_argument("max iterations must be positive");
    if (!(w_scale > 1.0)) throw std::invalid_argument("w_scale must exceed 1");
    auto fraction_ok = [](double f) { return f > 0.0 && f <= 1.0; };
    if (!fraction_ok(step_ind_initial_fraction) || !fraction_ok(step_vol_initial_fraction))
      throw std::invalid_argument("step fractions must lie in (0, 1]");
    if (sar_alpha0 < 0.0 || sar_alpha0 > 1.0) throw std::invalid_argument("sar_alpha0 must lie in [0, 1]");
    if (sar_decay_rate < 0.0) throw std::invalid_argument("sar_decay_rate must be non-negative");
  }
};

struct Fish {
  std::vector<double> position;
  double fitness = 0.0;
  double weight = 1.0;
  /// Displacement and fitness change of the last individual move; zero when it was rejected.
  std::vector<double> last_displacement;
  double last_fitness_delta = 0.0;
  bool improved = false;
  /// Weight change applied by the last feeding.
  double weight_delta = 0.0;
  /// Last strictly improving individual displacement and the step it was taken with.
  /// success_step == 0 means the fish has never improved.
  std::vector<double> success_displacement;
  double success_step = 0.0;
};

/// Linear decay from `initial` at t = 0 to 0 at t = it_max.
inline double step_schedule(double initial, std::size_t t, std::size_t it_max) {
  if (it_max == 0 || t >= it_max) return 0.0;
  double s = initial * (1.0 - static_cast<double>(t) / static_cast<double>(it_max));
  return std::max(s, 0.0);
}

/// Worsening-acceptance probability alpha0 * exp(-rate * t).
inline double sar_alpha(std::size_t t, double alpha0, double rate) {
  return alpha0 * std::exp(-rate * static_cast<double>(t));
}

// --- individual movement -------------------------------------------------------------------

/// candidate = position + offsets * step, clamped. Offsets are the rand(-1, 1) draws.
inline void individual_candidate(std::span<const double> position, std::span<const double> offsets, double step,
                                 const SearchSpace& space, std::span<double> out) {
  for (std::size_t d = 0; d < position.size(); ++d) out[d] = space.clamp(position[d] + offsets[d] * step);
}

/// Accepts or rejects an evaluated candidate and records the move on the fish.
/// `accept_worse` carries the outcome of the worsening-acceptance draw.
inline void settle_individual_move(Fish& fish, std::span<const double> candidate, double candidate_fitness,
                                   double step, bool accept_worse) {
  const bool better = candidate_fitness > fish.fitness;
  fish.last_displacement.resize(fish.position.size());
  if (!better && !accept_worse) {
    std::fill(fish.last_displacement.begin(), fish.last_displacement.end(), 0.0);
    fish.last_fitness_delta = 0.0;
    fish.improved = false;
    return;
  }
  for (std::size_t d = 0; d < fish.position.size(); ++d) fish.last_displacement[d] = candidate[d] - fish.position[d];
  fish.last_fitness_delta = candidate_fitness - fish.fitness;
  fish.improved = better;
  if (better) {
    fish.success_displacement = fish.last_displacement;
    fish.success_step = step;
  }
  std::copy(candidate.begin(), candidate.end(), fish.position.begin());
  fish.fitness = candidate_fitness;
}

/// One individual move: per-dimension rand(-1, 1) offsets, then acceptance. The acceptance
/// draw is only taken for a non-improving candidate with alpha > 0, so alpha == 0 consumes
/// exactly the same random stream as plain improvement-only acceptance.
template <class Fitness>
void individual_movement(Fish& fish, double step_ind, double alpha, const SearchSpace& space, Fitness&& fitness,
                         Rng& rng, std::vector<double>& scratch) {
  const std::size_t n = fish.position.size();
  scratch.resize(2 * n);
  std::span<double> offsets(scratch.data(), n);
  std::span<double> candidate(scratch.data() + n, n);
  for (double& o : offsets) o = rng.uniform(-1.0, 1.0);
  individual_candidate(fish.position, offsets, step_ind, space, candidate);
  const double f = fitness(std::span<const double>(candidate));
  bool accept_worse = false;
  if (!(f > fish.fitness) && alpha > 0.0) accept_worse = rng.uniform01() < alpha;
  settle_individual_move(fish, candidate, f, step_ind, accept_worse);
}

// --- feeding -------------------------------------------------------------------------------

/// W += df / max|df|, clamped to [1, w_scale]. No change when no fish moved.
inline void feed_vanilla(std::span<Fish> school, double w_scale) {
  double max_abs = 0.0;
  for (const Fish& f : school) max_abs = std::max(max_abs, std::abs(f.last_fitness_delta));
  for (Fish& f : school) {
    const double before = f.weight;
    if (max_abs > 0.0) f.weight = std::clamp(f.weight + f.last_fitness_delta / max_abs, 1.0, w_scale);
    f.weight_delta = f.weight - before;
  }
}

/// Absolute weight 1 + (w_scale - 1)(F - f_min)/(f_max - f_min); the midpoint when the
/// observed fitness range is still empty.
inline double npss_weight(double fitness, double w_scale, double f_min, double f_max) {
  if (!(f_max > f_min)) return 1.0 + (w_scale - 1.0) / 2.0;
  const double ratio = std::clamp((fitness - f_min) / (f_max - f_min), 0.0, 1.0);
  return 1.0 + (w_scale - 1.0) * ratio;
}

inline void feed_npss(std::span<Fish> school, double w_scale, double f_min, double f_max) {
  for (Fish& f : school) {
    const double w = npss_weight(f.fitness, w_scale, f_min, f_max);
    f.weight_delta = w - f.weight;
    f.weight = w;
  }
}

// --- collective-instinctive movement --------------------------------------------------------

struct FakeContribution {
  std::vector<double> displacement;
  double weight_delta = 0.0;
};

/// Stand-in contribution of a fish that did not improve: its last improving displacement
/// rescaled from the step it was taken with to the current volitive step, and a weight gain
/// proportional to how heavy the fish already is.
inline FakeContribution npss_fake_contribution(const Fish& fish, double step_vol, double max_weight_delta,
                                               double w_scale) {
  FakeContribution fake;
  fake.displacement.assign(fish.position.size(), 0.0);
  if (fish.success_step <= 0.0 || fish.success_displacement.size() != fish.position.size()) return fake;
  for (std::size_t d = 0; d < fake.displacement.size(); ++d)
    fake.displacement[d] = step_vol * fish.success_displacement[d] / fish.success_step;
  fake.weight_delta = max_weight_delta * (fish.weight - 1.0) / (w_scale - 1.0);
  return fake;
}

/// Weighted mean displacement I followed by the whole school.
///   Vanilla:  sum(dx * df) / sum(df) over all fish
///   Sar:      same sums over improved fish only
///   NpssSar:  sum(dx * dW) / sum(dW), non-improved fish replaced by their fake contribution
/// A non-positive denominator yields the zero vector.
inline std::vector<double> instinctive_vector(std::span<const Fish> school, FssVariant variant, double step_vol,
                                              double w_scale) {
  const std::size_t n = school.empty() ? 0 : school.front().position.size();
  std::vector<double> numerator(n, 0.0);
  double denominator = 0.0;

  auto accumulate = [&](std::span<const double> dx, double w) {
    for (std::size_t d = 0; d < n; ++d) numerator[d] += dx[d] * w;
    denominator += w;
  };

  switch (variant) {
    case FssVariant::Vanilla:
      for (const Fish& f : school) accumulate(f.last_displacement, f.last_fitness_delta);
      break;
    case FssVariant::Sar:
      for (const Fish& f : school)
        if (f.improved) accumulate(f.last_displacement, f.last_fitness_delta);
      break;
    case FssVariant::NpssSar: {
      double max_gain = 0.0;
      for (const Fish& f : school)
        if (f.improved) max_gain = std::max(max_gain, f.weight_delta);
      for (const Fish& f : school) {
        if (f.improved) {
          accumulate(f.last_displacement, f.weight_delta);
        } else {
          auto fake = npss_fake_contribution(f, step_vol, max_gain, w_scale);
          accumulate(fake.displacement, fake.weight_delta);
        }
      }
      break;
    }
  }

  if (!(denominator > 0.0)) return std::vector<double>(n, 0.0);
  for (double& v : numerator) v /= denominator;
  return numerator;
}

inline void collective_instinctive(std::span<Fish> school, FssVariant variant, double step_vol, double w_scale,
                                   const SearchSpace& space) {
  const auto drift = instinctive_vector(school, variant, step_vol, w_scale);
  for (Fish& f : school)
    for (std::size_t d = 0; d < drift.size(); ++d) f.position[d] = space.clamp(f.position[d] + drift[d]);
}

// --- collective-volitive movement -----------------------------------------------------------

/// Weight-weighted mean position.
inline std::vector<double> barycenter(std::span<const Fish> school) {
  const std::size_t n = school.empty() ? 0 : school.front().position.size();
  std::vector<double> b(n, 0.0);
  double total = 0.0;
  for (const Fish& f : school) {
    for (std::size_t d = 0; d < n; ++d) b[d] += f.position[d] * f.weight;
    total += f.weight;
  }
  if (total > 0.0)
    for (double& v : b) v /= total;
  return b;
}

inline double total_weight(std::span<const Fish> school) {
  double total = 0.0;
  for (const Fish& f : school) total += f.weight;
  return total;
}

/// Moves one fish step_vol * draw along the unit vector away from (or, when contracting,
/// towards) the barycenter. A fish sitting on the barycenter stays put.
inline void volitive_move(Fish& fish, std::span<const double> center, double step_vol, bool contract, double draw,
                          const SearchSpace& space) {
  double dist2 = 0.0;
  for (std::size_t d = 0; d < center.size(); ++d) {
    const double diff = fish.position[d] - center[d];
    dist2 += diff * diff;
  }
  if (dist2 == 0.0) return;
  const double scale = (contract ? -1.0 : 1.0) * step_vol * draw / std::sqrt(dist2);
  for (std::size_t d = 0; d < center.size(); ++d)
    fish.position[d] = space.clamp(fish.position[d] + scale * (fish.position[d] - center[d]));
}

/// Contracts towards the barycenter if the school got heavier since `previous_total_weight`,
/// expands otherwise. One rand(0, 1) per fish, drawn even for a fish on the barycenter.
inline void collective_volitive(std::span<Fish> school, double step_vol, double previous_total_weight,
                                const SearchSpace& space, Rng& rng) {
  const auto center = barycenter(school);
  const bool contract = total_weight(school) > previous_total_weight;
  for (Fish& f : school) volitive_move(f, center, step_vol, contract, rng.uniform01(), space);
}

}  // namespace mmal::swarm
