#pragma once

// Random-keys decoders: continuous positions -> task orders and model sequences.
// Everything here is 0-based (task 0 is the first task, model 0 the first model).

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mmal::encoding {

/// Tasks in priority order; each of 0..T-1 appears exactly once.
struct TaskPermutation {
  std::vector<std::size_t> order;
};

/// Model launched at each slot of the production plan.
struct ModelSequence {
  std::vector<std::size_t> slots;
};

namespace detail {

/// Component indices sorted by value, ties by lower index.
inline std::vector<std::size_t> ascending_indices(std::span<const double> position) {
  std::vector<std::pair<double, std::size_t>> keyed(position.size());
  for (std::size_t j = 0; j < position.size(); ++j) keyed[j] = {position[j], j};
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> idx(position.size());
  for (std::size_t r = 0; r < keyed.size(); ++r) idx[r] = keyed[r].second;
  return idx;
}

}  // namespace detail

/// order[j] = rank of position[j] (0 = smallest).
inline TaskPermutation random_keys_decode(std::span<const double> position) {
  const auto idx = detail::ascending_indices(position);
  TaskPermutation perm;
  perm.order.resize(position.size());
  for (std::size_t rank = 0; rank < idx.size(); ++rank) perm.order[idx[rank]] = rank;
  return perm;
}

/// Model 0 takes the P_0 smallest components, model 1 the next P_1 smallest, and so on.
inline ModelSequence multiple_random_keys_decode(std::span<const double> position,
                                                 std::span<const std::size_t> production_levels) {
  const std::size_t total = std::accumulate(production_levels.begin(), production_levels.end(), std::size_t{0});
  if (position.size() != total)
    throw std::invalid_argument("position has " + std::to_string(position.size()) +
                                " components but the plan has " + std::to_string(total) + " units");
  const auto idx = detail::ascending_indices(position);
  ModelSequence seq;
  seq.slots.resize(total);
  std::size_t next = 0;
  for (std::size_t model = 0; model < production_levels.size(); ++model)
    for (std::size_t k = 0; k < production_levels[model]; ++k) seq.slots[idx[next++]] = model;
  return seq;
}

/// True if `seq` contains model i exactly production_levels[i] times.
inline bool matches_plan(const ModelSequence& seq, std::span<const std::size_t> production_levels) {
  std::vector<std::size_t> count(production_levels.size(), 0);
  for (auto m : seq.slots) {
    if (m >= count.size()) return false;
    ++count[m];
  }
  return std::equal(count.begin(), count.end(), production_levels.begin(), production_levels.end());
}

}  // namespace mmal::encoding
