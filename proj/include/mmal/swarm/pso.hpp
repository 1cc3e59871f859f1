#pragma once

// Constriction-factor particle swarm (Clerc & Kennedy form), maximizing.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmal/swarm/rng.hpp"
#include "mmal/swarm/search_space.hpp"

namespace mmal::swarm {

struct PsoConfig {
  std::size_t swarm_size = 30;
  std::size_t max_iterations = 1000;
  double c1 = 2.1;
  double c2 = 2.1;
  std::uint64_t rng_seed = 0;
  double iuc_threshold = 1e-4;

  void validate() const {
    if (swarm_size == 0) throw std::invalid_argument("swarm size must be positive");
    if (max_iterations == 0) throw std::invalid_argument("max iterations must be positive");
    if (!(c1 + c2 >= 4.0)) throw std::invalid_argument("constriction PSO needs c1 + c2 >= 4");
  }
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_fitness = 0.0;
};

/// chi = 2 / |2 - phi - sqrt(phi (phi - 4))| with phi = c1 + c2 >= 4.
inline double constriction_factor(double c1, double c2) {
  const double phi = c1 + c2;
  if (!(phi >= 4.0)) throw std::invalid_argument("constriction factor is undefined for c1 + c2 < 4");
  return 2.0 / std::abs(2.0 - phi - std::sqrt(phi * (phi - 4.0)));
}

/// v <- chi [v + c1 r1 (pb - x) + c2 r2 (gb - x)], x <- clamp(x + v). r1 and r2 hold one draw
/// per dimension.
inline void pso_move(Particle& p, std::span<const double> global_best, double chi, double c1, double c2,
                     std::span<const double> r1, std::span<const double> r2, const SearchSpace& space) {
  for (std::size_t d = 0; d < p.position.size(); ++d) {
    const double x = p.position[d];
    p.velocity[d] = chi * (p.velocity[d] + c1 * r1[d] * (p.best_position[d] - x) + c2 * r2[d] * (global_best[d] - x));
    p.position[d] = space.clamp(x + p.velocity[d]);
  }
}

/// Moves every particle once. Bests are not touched; the caller evaluates and updates them.
inline void pso_update(std::span<Particle> swarm, std::span<const double> global_best, double c1, double c2,
                       const SearchSpace& space, Rng& rng) {
  const double chi = constriction_factor(c1, c2);
  std::vector<double> r1(global_best.size()), r2(global_best.size());
  for (Particle& p : swarm) {
    for (std::size_t d = 0; d < r1.size(); ++d) {
      r1[d] = rng.uniform01();
      r2[d] = rng.uniform01();
    }
    pso_move(p, global_best, chi, c1, c2, r1, r2, space);
  }
}

}  // namespace mmal::swarm
