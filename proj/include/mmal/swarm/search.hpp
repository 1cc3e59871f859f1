#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "mmal/swarm/archive.hpp"
#include "mmal/swarm/fish_school.hpp"
#include "mmal/swarm/pso.hpp"
#include "mmal/swarm/rng.hpp"
#include "mmal/swarm/search_space.hpp"

namespace mmal::swarm {

struct SearchResult {
  std::vector<double> best_position;
  double best_fitness = -std::numeric_limits<double>::infinity();
  /// Last iteration (1-based) whose best-so-far gain exceeded the threshold; 0 if none did.
  std::size_t iterations_until_convergence = 0;
  /// Best-so-far after initialisation and after every iteration (max_iterations + 1 values).
  std::vector<double> fitness_history;
  std::vector<ArchiveEntry> archive;
};

namespace detail {

/// Wraps the objective so every evaluation updates best-so-far, the observed fitness range
/// and the archive.
template <class Fitness>
class Tracker {
 public:
  Tracker(Fitness& fitness, std::size_t archive_size, SolutionKey key)
      : fitness_(fitness), archive_(archive_size, std::move(key)) {}

  double operator()(std::span<const double> x) {
    const double f = fitness_(x);
    if (f > best_fitness_) {
      best_fitness_ = f;
      best_position_.assign(x.begin(), x.end());
    }
    f_min_ = std::min(f_min_, f);
    f_max_ = std::max(f_max_, f);
    archive_.offer(x, f);
    return f;
  }

  double best_fitness() const { return best_fitness_; }
  double f_min() const { return f_min_; }
  double f_max() const { return f_max_; }

  void close_iteration(std::size_t iteration, double threshold) {
    if (!history_.empty() && best_fitness_ - history_.back() > threshold) iuc_ = iteration;
    history_.push_back(best_fitness_);
  }

  SearchResult finish() {
    SearchResult r;
    r.best_position = std::move(best_position_);
    r.best_fitness = best_fitness_;
    r.iterations_until_convergence = iuc_;
    r.fitness_history = std::move(history_);
    r.archive = archive_.release();
    return r;
  }

 private:
  Fitness& fitness_;
  SolutionArchive archive_;
  std::vector<double> best_position_;
  double best_fitness_ = -std::numeric_limits<double>::infinity();
  double f_min_ = std::numeric_limits<double>::infinity();
  double f_max_ = -std::numeric_limits<double>::infinity();
  std::vector<double> history_;
  std::size_t iuc_ = 0;
};

inline std::vector<double> random_position(const SearchSpace& space, Rng& rng) {
  std::vector<double> x(space.dimensions);
  for (double& v : x) v = rng.uniform(space.lower_bound, space.upper_bound);
  return x;
}

}  // namespace detail

/// Fish School Search, maximizing `fitness` over `space`. Each iteration runs individual
/// movement, feeding, collective-instinctive and collective-volitive movement, then
/// re-evaluates the school at its new positions.
template <class Fitness>
SearchResult run_fss(const FssConfig& config, const SearchSpace& space, Fitness&& fitness, std::size_t archive_size = 1,
                     SolutionKey key = {}) {
  config.validate();
  space.validate();
  Rng rng(config.rng_seed);
  detail::Tracker<std::remove_reference_t<Fitness>> eval(fitness, archive_size, std::move(key));

  std::vector<Fish> school(config.school_size);
  for (Fish& f : school) {
    f.position = detail::random_position(space, rng);
    f.weight = config.w_scale / 2.0;
    f.last_displacement.assign(space.dimensions, 0.0);
    f.fitness = eval(f.position);
  }
  eval.close_iteration(0, config.iuc_threshold);

  const double step_ind0 = config.step_ind_initial_fraction * space.width();
  const double step_vol0 = config.step_vol_initial_fraction * space.width();
  const bool sar = config.variant != FssVariant::Vanilla;
  double previous_weight = total_weight(school);
  std::vector<double> scratch;

  for (std::size_t t = 0; t < config.max_iterations; ++t) {
    const double step_ind = step_schedule(step_ind0, t, config.max_iterations);
    const double step_vol = step_schedule(step_vol0, t, config.max_iterations);
    const double alpha = sar ? sar_alpha(t, config.sar_alpha0, config.sar_decay_rate) : 0.0;

    for (Fish& f : school) individual_movement(f, step_ind, alpha, space, eval, rng, scratch);

    if (config.variant == FssVariant::NpssSar)
      feed_npss(school, config.w_scale, eval.f_min(), eval.f_max());
    else
      feed_vanilla(school, config.w_scale);

    collective_instinctive(school, config.variant, step_vol, config.w_scale, space);
    collective_volitive(school, step_vol, previous_weight, space, rng);
    previous_weight = total_weight(school);

    for (Fish& f : school) f.fitness = eval(f.position);
    eval.close_iteration(t + 1, config.iuc_threshold);
  }
  return eval.finish();
}

/// Constriction PSO, maximizing. Velocities start at zero; the global best is refreshed
/// after the whole swarm has moved.
template <class Fitness>
SearchResult run_pso(const PsoConfig& config, const SearchSpace& space, Fitness&& fitness, std::size_t archive_size = 1,
                     SolutionKey key = {}) {
  config.validate();
  space.validate();
  Rng rng(config.rng_seed);
  detail::Tracker<std::remove_reference_t<Fitness>> eval(fitness, archive_size, std::move(key));

  std::vector<Particle> swarm(config.swarm_size);
  std::size_t leader = 0;
  for (std::size_t i = 0; i < swarm.size(); ++i) {
    Particle& p = swarm[i];
    p.position = detail::random_position(space, rng);
    p.velocity.assign(space.dimensions, 0.0);
    p.best_position = p.position;
    p.best_fitness = eval(p.position);
    if (p.best_fitness > swarm[leader].best_fitness) leader = i;
  }
  eval.close_iteration(0, config.iuc_threshold);

  std::vector<double> global_best = swarm[leader].best_position;
  for (std::size_t t = 0; t < config.max_iterations; ++t) {
    pso_update(swarm, global_best, config.c1, config.c2, space, rng);
    for (std::size_t i = 0; i < swarm.size(); ++i) {
      Particle& p = swarm[i];
      const double f = eval(p.position);
      if (f > p.best_fitness) {
        p.best_fitness = f;
        p.best_position = p.position;
      }
      if (p.best_fitness > swarm[leader].best_fitness) leader = i;
    }
    global_best = swarm[leader].best_position;
    eval.close_iteration(t + 1, config.iuc_threshold);
  }
  return eval.finish();
}

// --- algorithm selection ---------------------------------------------------------------------

enum class Algorithm { FssVanilla, FssSar, FssNpssSar, Pso };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::FssVanilla, Algorithm::FssSar, Algorithm::FssNpssSar,
                                               Algorithm::Pso};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::FssVanilla: return "fss-v";
    case Algorithm::FssSar: return "fss-sar";
    case Algorithm::FssNpssSar: return "fss-npss-sar";
    case Algorithm::Pso: return "pso";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms)
    if (to_string(a) == name) return a;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

using OptimizerConfig = std::variant<FssConfig, PsoConfig>;

/// Default parameters for `algorithm` with the given population, budget and seed.
inline OptimizerConfig make_optimizer_config(Algorithm algorithm, std::size_t population, std::size_t iterations,
                                             std::uint64_t seed) {
  if (algorithm == Algorithm::Pso) {
    PsoConfig c;
    c.swarm_size = population;
    c.max_iterations = iterations;
    c.rng_seed = seed;
    return c;
  }
  FssConfig c;
  c.school_size = population;
  c.max_iterations = iterations;
  c.rng_seed = seed;
  c.variant = algorithm == Algorithm::FssVanilla ? FssVariant::Vanilla
              : algorithm == Algorithm::FssSar   ? FssVariant::Sar
                                                 : FssVariant::NpssSar;
  return c;
}

inline Algorithm algorithm_of(const OptimizerConfig& config) {
  if (const auto* fss = std::get_if<FssConfig>(&config)) {
    switch (fss->variant) {
      case FssVariant::Vanilla: return Algorithm::FssVanilla;
      case FssVariant::Sar: return Algorithm::FssSar;
      case FssVariant::NpssSar: return Algorithm::FssNpssSar;
    }
  }
  return Algorithm::Pso;
}

inline std::uint64_t seed_of(const OptimizerConfig& config) {
  return std::visit([](const auto& c) { return c.rng_seed; }, config);
}

inline OptimizerConfig with_seed(OptimizerConfig config, std::uint64_t seed) {
  std::visit([&](auto& c) { c.rng_seed = seed; }, config);
  return config;
}

template <class Fitness>
SearchResult run_search(const OptimizerConfig& config, const SearchSpace& space, Fitness&& fitness,
                        std::size_t archive_size = 1, SolutionKey key = {}) {
  return std::visit(
      [&](const auto& c) -> SearchResult {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, FssConfig>)
          return run_fss(c, space, fitness, archive_size, std::move(key));
        else
          return run_pso(c, space, fitness, archive_size, std::move(key));
      },
      config);
}

}  // namespace mmal::swarm
