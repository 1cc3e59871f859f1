#pragma once

// Mixed-model workplace-time-dependent line balancing: mean-model construction, a
// task-oriented decoder onto multi-manned workstations with zone displacement charges, and the
// K * sqrt(sum (C - t_k)^2) objective.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmal/encoding.hpp"
#include "mmal/error.hpp"
#include "mmal/precedence.hpp"

namespace mmal::balancing {

struct ModelData {
  std::vector<double> task_times;
  std::size_t production_level = 0;
};

/// Square matrix of travel times between zones, row = from, column = to.
class DisplacementMatrix {
 public:
  DisplacementMatrix() = default;
  explicit DisplacementMatrix(std::size_t zones) : zones_(zones), values_(zones * zones, 0.0) {}

  std::size_t zones() const { return zones_; }
  double operator()(std::size_t from, std::size_t to) const { return values_[from * zones_ + to]; }
  double& operator()(std::size_t from, std::size_t to) { return values_[from * zones_ + to]; }

  bool operator==(const DisplacementMatrix&) const = default;

 private:
  std::size_t zones_ = 0;
  std::vector<double> values_;
};

inline constexpr std::size_t kDefaultZones = 4;

struct BalancingInstance {
  std::vector<double> mean_times;
  std::vector<Edge> joint_precedence;
  /// predecessors[j] = direct predecessors of task j under joint_precedence.
  std::vector<std::vector<std::size_t>> predecessors;
  /// Zone of each task, 0-based.
  std::vector<std::size_t> zones;
  DisplacementMatrix displacement;
  double cycle_time = 0.0;
  std::size_t max_workplaces = 1;
  std::vector<ModelData> models;

  std::size_t num_tasks() const { return mean_times.size(); }

  std::vector<std::size_t> production_levels() const {
    std::vector<std::size_t> levels;
    for (const auto& m : models) levels.push_back(m.production_level);
    return levels;
  }

  /// Structural checks plus the fail-fast capacity check (throws InfeasibleTaskError).
  void validate() const {
    const std::size_t n = num_tasks();
    if (n == 0) throw std::invalid_argument("instance has no tasks");
    if (!(cycle_time > 0.0)) throw std::invalid_argument("cycle time must be positive");
    if (max_workplaces == 0) throw std::invalid_argument("max workplaces per workstation must be at least 1");
    if (zones.size() != n || predecessors.size() != n)
      throw std::invalid_argument("zones and predecessor lists must cover every task");
    for (auto z : zones)
      if (z >= displacement.zones()) throw std::invalid_argument("task zone outside the displacement matrix");
    for (std::size_t a = 0; a < displacement.zones(); ++a) {
      if (displacement(a, a) != 0.0) throw std::invalid_argument("displacement diagonal must be zero");
      for (std::size_t b = 0; b < displacement.zones(); ++b)
        if (displacement(a, b) < 0.0) throw std::invalid_argument("displacement times must be non-negative");
    }
    for (const auto& m : models)
      if (m.task_times.size() != n) throw std::invalid_argument("model task times do not match the task count");
    for (std::size_t j = 0; j < n; ++j) {
      if (mean_times[j] < 0.0) throw std::invalid_argument("negative task time");
      if (mean_times[j] > cycle_time) throw InfeasibleTaskError(j, mean_times[j], cycle_time);
    }
  }
};

struct MeanModel {
  std::vector<double> mean_times;
  std::vector<Edge> joint_precedence;
};

/// Production-weighted mean task times and the union precedence graph.
inline MeanModel build_mean_model(const std::vector<ModelData>& models,
                                  const std::vector<std::vector<Edge>>& per_model_precedence) {
  if (models.empty()) throw std::invalid_argument("at least one model is required");
  const std::size_t n = models.front().task_times.size();
  double total_level = 0.0;
  for (const auto& m : models) {
    if (m.task_times.size() != n) throw std::invalid_argument("models disagree on the number of tasks");
    total_level += static_cast<double>(m.production_level);
  }
  if (total_level == 0.0) throw std::invalid_argument("total production level is zero");

  MeanModel mean;
  mean.mean_times.assign(n, 0.0);
  for (const auto& m : models)
    for (std::size_t j = 0; j < n; ++j) mean.mean_times[j] += static_cast<double>(m.production_level) * m.task_times[j];
  for (double& t : mean.mean_times) t /= total_level;

  mean.joint_precedence = union_edges(per_model_precedence);
  for (auto [a, b] : mean.joint_precedence)
    if (a >= n || b >= n) throw std::invalid_argument("precedence edge references an unknown task");
  require_acyclic(n, mean.joint_precedence);
  return mean;
}

/// Assembles and validates an instance from per-model data.
inline BalancingInstance make_instance(std::vector<ModelData> models,
                                       const std::vector<std::vector<Edge>>& per_model_precedence,
                                       std::vector<std::size_t> zones, DisplacementMatrix displacement,
                                       double cycle_time, std::size_t max_workplaces) {
  auto mean = build_mean_model(models, per_model_precedence);
  BalancingInstance inst;
  inst.predecessors = predecessor_lists(mean.mean_times.size(), mean.joint_precedence);
  inst.mean_times = std::move(mean.mean_times);
  inst.joint_precedence = std::move(mean.joint_precedence);
  inst.zones = std::move(zones);
  inst.displacement = std::move(displacement);
  inst.cycle_time = cycle_time;
  inst.max_workplaces = max_workplaces;
  inst.models = std::move(models);
  inst.validate();
  return inst;
}

// --- solution -------------------------------------------------------------------------------

struct TaskSlot {
  std::size_t workstation = 0;
  /// Index into BalancingSolution::workplaces (line order, not per workstation).
  std::size_t workplace = 0;
};

struct Workplace {
  std::size_t workstation = 0;
  /// Tasks in execution order.
  std::vector<std::size_t> tasks;
  /// Displacement time charged to each task, parallel to `tasks`.
  std::vector<double> displacement_charges;
  /// Mean-model time plus displacement charges.
  double load = 0.0;
};

struct BalancingSolution {
  std::vector<TaskSlot> assignment;
  std::vector<Workplace> workplaces;
  std::size_t num_workstations = 0;
  double fitness = 0.0;

  std::size_t num_workplaces() const { return workplaces.size(); }

  std::vector<double> workplace_loads() const {
    std::vector<double> loads;
    loads.reserve(workplaces.size());
    for (const auto& w : workplaces) loads.push_back(w.load);
    return loads;
  }
};

/// K * sqrt(sum_k (C - t_k)^2), minimized.
inline double balancing_objective(std::span<const double> loads, double cycle_time) {
  double sum = 0.0;
  for (double t : loads) sum += (cycle_time - t) * (cycle_time - t);
  return static_cast<double>(loads.size()) * std::sqrt(sum);
}

/// Fitness given to a permutation whose decode fails; below every feasible fitness.
inline constexpr double kInfeasibleFitness = -std::numeric_limits<double>::max();

/// Decodes a task order into workstations and workplaces.
///
/// Tasks are taken in permutation order, repaired for precedence: the next task is the earliest
/// unassigned one whose predecessors are all assigned. Each task tries the open workplaces of the
/// current workstation in order, then a new workplace if fewer than max_workplaces are open, and
/// otherwise starts the next workstation. A task may share a workstation with a predecessor only
/// on the predecessor's own workplace. Placing task j after task i on a workplace costs
/// displacement(zone(i), zone(j)) + mean_time(j); the first task on a workplace pays no travel.
inline BalancingSolution decode_balancing(const encoding::TaskPermutation& perm, const BalancingInstance& inst) {
  const std::size_t n = inst.num_tasks();
  if (perm.order.size() != n) throw std::invalid_argument("permutation length does not match the task count");
  const double capacity = inst.cycle_time;
  for (std::size_t j = 0; j < n; ++j)
    if (inst.mean_times[j] > capacity) throw InfeasibleTaskError(j, inst.mean_times[j], capacity);

  constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
  BalancingSolution sol;
  sol.assignment.assign(n, TaskSlot{kUnassigned, kUnassigned});
  std::vector<char> used(n, 0);  // position in perm.order already consumed
  std::size_t station = 0;
  std::size_t station_first_wp = 0;

  auto ready = [&](std::size_t task) {
    for (auto p : inst.predecessors[task])
      if (sol.assignment[p].workstation == kUnassigned) return false;
    return true;
  };

  auto place = [&](std::size_t task, std::size_t wp, double charge) {
    Workplace& w = sol.workplaces[wp];
    w.tasks.push_back(task);
    w.displacement_charges.push_back(charge);
    w.load += charge + inst.mean_times[task];
    sol.assignment[task] = TaskSlot{w.workstation, wp};
  };

  auto open_workplace = [&]() {
    sol.workplaces.push_back(Workplace{station, {}, {}, 0.0});
    return sol.workplaces.size() - 1;
  };

  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!used[i] && ready(perm.order[i])) {
        pick = i;
        break;
      }
    }
    if (pick == n) throw CycleError({});  // unreachable for an acyclic instance
    used[pick] = 1;
    const std::size_t task = perm.order[pick];
    const double time = inst.mean_times[task];

    if (sol.workplaces.empty()) {
      place(task, open_workplace(), 0.0);
      continue;
    }

    // Workplace of the current station that holds this task's in-station predecessors.
    std::size_t pred_wp = kUnassigned;
    bool split = false;
    for (auto p : inst.predecessors[task]) {
      if (sol.assignment[p].workstation != station) continue;
      if (pred_wp == kUnassigned)
        pred_wp = sol.assignment[p].workplace;
      else if (pred_wp != sol.assignment[p].workplace)
        split = true;
    }

    bool placed = false;
    if (!split) {
      for (std::size_t wp = station_first_wp; wp < sol.workplaces.size() && !placed; ++wp) {
        if (pred_wp != kUnassigned && wp != pred_wp) continue;
        const Workplace& w = sol.workplaces[wp];
        const double charge = inst.displacement(inst.zones[w.tasks.back()], inst.zones[task]);
        if (w.load + charge + time <= capacity) {
          place(task, wp, charge);
          placed = true;
        }
      }
      if (!placed && pred_wp == kUnassigned && sol.workplaces.size() - station_first_wp < inst.max_workplaces) {
        place(task, open_workplace(), 0.0);
        placed = true;
      }
    }
    if (!placed) {
      ++station;
      station_first_wp = sol.workplaces.size();
      place(task, open_workplace(), 0.0);
    }
  }

  sol.num_workstations = station + 1;
  const auto loads = sol.workplace_loads();
  sol.fitness = -balancing_objective(loads, capacity);
  return sol;
}

/// -objective of the decoded balance; kInfeasibleFitness if the decode fails.
inline double balancing_fitness(const encoding::TaskPermutation& perm, const BalancingInstance& inst) {
  try {
    return decode_balancing(perm, inst).fitness;
  } catch (const InfeasibleTaskError&) {
    return kInfeasibleFitness;
  }
}

/// Identity of a decoded balance: task lists of every workplace in line order, each closed by
/// -1 and prefixed by its workstation. Equal keys imply equal loads.
inline std::vector<int> balance_key(const BalancingSolution& sol) {
  std::vector<int> key;
  for (const auto& w : sol.workplaces) {
    key.push_back(static_cast<int>(w.workstation));
    for (auto t : w.tasks) key.push_back(static_cast<int>(t));
    key.push_back(-1);
  }
  return key;
}

/// Checks the decoder's precedence rule: each predecessor sits in an earlier workstation, or
/// earlier on the same workplace.
inline bool respects_precedence(const BalancingSolution& sol, const BalancingInstance& inst) {
  std::vector<std::size_t> position(inst.num_tasks(), 0);
  for (const auto& w : sol.workplaces)
    for (std::size_t i = 0; i < w.tasks.size(); ++i) position[w.tasks[i]] = i;
  for (auto [a, b] : inst.joint_precedence) {
    const auto& sa = sol.assignment[a];
    const auto& sb = sol.assignment[b];
    if (sa.workstation < sb.workstation) continue;
    if (sa.workstation == sb.workstation && sa.workplace == sb.workplace && position[a] < position[b]) continue;
    return false;
  }
  return true;
}

}  // namespace mmal::balancing
