#pragma once

// Work-overload sequencing on a paced line of closed stations. Times are in cycle-time units:
// job i (0-based) enters every workplace at time i and must leave it at i + L.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmal/balancing.hpp"
#include "mmal/encoding.hpp"

namespace mmal::sequencing {

struct SequencingInstance {
  std::size_t num_workplaces = 0;
  double station_length = 0.95;
  /// Row-major models x workplaces.
  std::vector<double> process_time;
  std::vector<std::size_t> production_levels;

  std::size_t num_models() const { return production_levels.size(); }
  std::size_t total_jobs() const {
    return std::accumulate(production_levels.begin(), production_levels.end(), std::size_t{0});
  }
  double p(std::size_t model, std::size_t workplace) const { return process_time[model * num_workplaces + workplace]; }
};

/// Per-model workplace times of a balance, divided by the cycle time. Displacement charges are
/// model independent and added to every model.
inline SequencingInstance derive_process_times(const balancing::BalancingSolution& balance,
                                               const balancing::BalancingInstance& instance, double station_length) {
  if (!(station_length > 0.0)) throw std::invalid_argument("station length must be positive");
  SequencingInstance seq;
  seq.num_workplaces = balance.num_workplaces();
  seq.station_length = station_length;
  seq.production_levels = instance.production_levels();
  seq.process_time.assign(instance.models.size() * seq.num_workplaces, 0.0);
  for (std::size_t m = 0; m < instance.models.size(); ++m) {
    const auto& times = instance.models[m].task_times;
    for (std::size_t k = 0; k < seq.num_workplaces; ++k) {
      const auto& w = balance.workplaces[k];
      double total = 0.0;
      for (std::size_t i = 0; i < w.tasks.size(); ++i) total += times[w.tasks[i]] + w.displacement_charges[i];
      seq.process_time[m * seq.num_workplaces + k] = total / instance.cycle_time;
    }
  }
  return seq;
}

/// Start, finish and completed work per (job, workplace), row-major jobs x workplaces.
struct SequenceEvaluation {
  std::size_t jobs = 0;
  std::size_t workplaces = 0;
  std::vector<double> start;
  std::vector<double> finish;
  std::vector<double> completed;
  double total_completed_work = 0.0;
  double total_workload = 0.0;

  double s(std::size_t i, std::size_t k) const { return start[i * workplaces + k]; }
  double f(std::size_t i, std::size_t k) const { return finish[i * workplaces + k]; }
  double v(std::size_t i, std::size_t k) const { return completed[i * workplaces + k]; }

  /// Fraction of the workload finished inside the stations; 1 for an empty workload.
  double completion_ratio() const { return total_workload > 0.0 ? total_completed_work / total_workload : 1.0; }
};

namespace detail {

/// s = max(i, f_prev), f = min(s + p, i + L), v = max(0, min(p, i + L - s)).
/// `visit(i, k, s, f, v)` sees every cell; returns (completed work, workload).
template <class Visit>
std::pair<double, double> run_recursion(const encoding::ModelSequence& seq, const SequencingInstance& inst,
                                        Visit&& visit) {
  const std::size_t K = inst.num_workplaces;
  const double L = inst.station_length;
  const double* times = inst.process_time.data();
  double cw = 0.0, wl = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    double previous_finish = 0.0;
    for (std::size_t i = 0; i < seq.slots.size(); ++i) {
      const double launch = static_cast<double>(i);
      const double p = times[seq.slots[i] * K + k];
      const double s = std::max(launch, previous_finish);
      const double border = launch + L;
      const double f = std::min(s + p, border);
      const double v = std::max(0.0, std::min(p, border - s));
      previous_finish = f;
      cw += v;
      wl += p;
      visit(i, k, s, f, v);
    }
  }
  return {cw, wl};
}

inline void check_sequence(const encoding::ModelSequence& seq, const SequencingInstance& inst) {
  if (!encoding::matches_plan(seq, inst.production_levels))
    throw std::invalid_argument("sequence does not match the production plan");
}

}  // namespace detail

inline SequenceEvaluation evaluate_sequence(const encoding::ModelSequence& seq, const SequencingInstance& inst) {
  detail::check_sequence(seq, inst);
  SequenceEvaluation e;
  e.jobs = seq.slots.size();
  e.workplaces = inst.num_workplaces;
  e.start.resize(e.jobs * e.workplaces);
  e.finish.resize(e.jobs * e.workplaces);
  e.completed.resize(e.jobs * e.workplaces);
  auto [cw, wl] = detail::run_recursion(seq, inst, [&](std::size_t i, std::size_t k, double s, double f, double v) {
    const std::size_t at = i * e.workplaces + k;
    e.start[at] = s;
    e.finish[at] = f;
    e.completed[at] = v;
  });
  e.total_completed_work = cw;
  e.total_workload = wl;
  return e;
}

/// Sum of v over every job and workplace.
inline double completed_work(const SequenceEvaluation& e) { return e.total_completed_work; }

/// Completed work without materialising the schedule.
inline double completed_work(const encoding::ModelSequence& seq, const SequencingInstance& inst) {
  return detail::run_recursion(seq, inst, [](auto...) {}).first;
}

inline double sequencing_fitness(std::span<const double> position, const SequencingInstance& inst) {
  return completed_work(encoding::multiple_random_keys_decode(position, inst.production_levels), inst);
}

}  // namespace mmal::sequencing
