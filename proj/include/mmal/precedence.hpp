#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "mmal/error.hpp"

namespace mmal {

/// Directed precedence edge (predecessor, successor), 0-based task ids.
using Edge = std::pair<std::size_t, std::size_t>;

/// Sorted, duplicate-free union of edge lists.
inline std::vector<Edge> union_edges(const std::vector<std::vector<Edge>>& relations) {
  std::set<Edge> merged;
  for (const auto& relation : relations) merged.insert(relation.begin(), relation.end());
  return {merged.begin(), merged.end()};
}

inline std::vector<std::vector<std::size_t>> predecessor_lists(std::size_t num_tasks, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::size_t>> preds(num_tasks);
  for (auto [from, to] : edges) preds.at(to).push_back(from);
  for (auto& p : preds) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  return preds;
}

/// Returns one cycle of the relation (as the sequence of tasks along it), or nullopt when acyclic.
inline std::optional<std::vector<std::size_t>> find_cycle(std::size_t num_tasks, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::size_t>> succ(num_tasks);
  for (auto [from, to] : edges) succ.at(from).push_back(to);

  enum : char { kWhite, kGrey, kBlack };
  std::vector<char> colour(num_tasks, kWhite);
  std::vector<std::size_t> parent(num_tasks, num_tasks);

  // Iterative DFS; the stack holds (node, next successor slot).
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < num_tasks; ++root) {
    if (colour[root] != kWhite) continue;
    stack.push_back({root, 0});
    colour[root] = kGrey;
    while (!stack.empty()) {
      auto& [node, slot] = stack.back();
      if (slot == succ[node].size()) {
        colour[node] = kBlack;
        stack.pop_back();
        continue;
      }
      std::size_t next = succ[node][slot++];
      if (colour[next] == kGrey) {
        std::vector<std::size_t> cycle{node};
        for (std::size_t v = node; v != next;) {
          v = parent[v];
          cycle.push_back(v);
        }
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (colour[next] == kWhite) {
        parent[next] = node;
        colour[next] = kGrey;
        stack.push_back({next, 0});
      }
    }
  }
  return std::nullopt;
}

/// Throws CycleError if the relation is cyclic.
inline void require_acyclic(std::size_t num_tasks, const std::vector<Edge>& edges) {
  if (auto cycle = find_cycle(num_tasks, edges)) throw CycleError(std::move(*cycle));
}

}  // namespace mmal
