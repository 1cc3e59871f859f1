#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace mmal::swarm {

/// Box [lower_bound, upper_bound]^dimensions. Every optimizer hard-clamps into it after each move.
struct SearchSpace {
  std::size_t dimensions = 1;
  double lower_bound = -1000.0;
  double upper_bound = 1000.0;

  void validate() const {
    if (dimensions == 0) throw std::invalid_argument("search space needs at least one dimension");
    if (!(lower_bound < upper_bound)) throw std::invalid_argument("search space lower bound must be below upper bound");
  }

  double width() const { return upper_bound - lower_bound; }

  double clamp(double x) const { return std::clamp(x, lower_bound, upper_bound); }

  void clamp(std::span<double> x) const {
    for (double& v : x) v = clamp(v);
  }

  bool contains(std::span<const double> x) const {
    return x.size() == dimensions &&
           std::all_of(x.begin(), x.end(), [&](double v) { return v >= lower_bound && v <= upper_bound; });
  }
};

}  // namespace mmal::swarm
