#pragma once

// Simultaneous balancing and sequencing: optimise the balance, keep the n best distinct
// balances, sequence each of them, return the best combination.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmal/balancing.hpp"
#include "mmal/encoding.hpp"
#include "mmal/sequencing.hpp"
#include "mmal/swarm/search.hpp"

namespace mmal::pipeline {

using swarm::OptimizerConfig;

enum class SelectionMetric { CompletedWork, CwWlRatio };

struct PipelineConfig {
  OptimizerConfig balancing_search = swarm::FssConfig{};
  OptimizerConfig sequencing_search = swarm::FssConfig{};
  std::size_t archive_n = 10;
  SelectionMetric selection_metric = SelectionMetric::CompletedWork;
  double station_length = 0.95;
  /// Search box shared by both stages.
  double lower_bound = -1000.0;
  double upper_bound = 1000.0;
};

struct BalancingStage {
  /// Distinct balances, best first.
  std::vector<balancing::BalancingSolution> candidates;
  std::size_t iuc = 0;
};

struct SequencingOutcome {
  encoding::ModelSequence sequence;
  sequencing::SequenceEvaluation evaluation;
  std::size_t iuc = 0;
};

struct CombinedSolution {
  balancing::BalancingSolution balance;
  encoding::ModelSequence sequence;
  double completed_work = 0.0;
  double workload = 0.0;
  double cw_wl_ratio = 0.0;
  std::size_t iuc_balancing = 0;
  std::size_t iuc_sequencing = 0;
};

struct CandidateRecord {
  balancing::BalancingSolution balance;
  encoding::ModelSequence sequence;
  double completed_work = 0.0;
  double workload = 0.0;
  double cw_wl_ratio = 0.0;
  std::size_t iuc_sequencing = 0;
};

struct PipelineReport {
  CombinedSolution best;
  std::size_t selected = 0;
  std::vector<CandidateRecord> candidates;
};

inline BalancingStage solve_balancing_topn(const balancing::BalancingInstance& instance, const OptimizerConfig& config,
                                           std::size_t n, double lower_bound = -1000.0, double upper_bound = 1000.0) {
  if (n == 0) throw std::invalid_argument("archive size must be at least 1");
  instance.validate();
  const swarm::SearchSpace space{instance.num_tasks(), lower_bound, upper_bound};
  auto fitness = [&](std::span<const double> x) {
    return balancing::balancing_fitness(encoding::random_keys_decode(x), instance);
  };
  auto key = [&](std::span<const double> x) {
    return balancing::balance_key(balancing::decode_balancing(encoding::random_keys_decode(x), instance));
  };
  auto result = swarm::run_search(config, space, fitness, n, key);

  BalancingStage stage;
  stage.iuc = result.iterations_until_convergence;
  for (const auto& entry : result.archive)
    stage.candidates.push_back(balancing::decode_balancing(encoding::random_keys_decode(entry.position), instance));
  return stage;
}

inline SequencingOutcome solve_sequencing(const sequencing::SequencingInstance& instance,
                                          const OptimizerConfig& config, double lower_bound = -1000.0,
                                          double upper_bound = 1000.0) {
  const swarm::SearchSpace space{instance.total_jobs(), lower_bound, upper_bound};
  auto fitness = [&](std::span<const double> x) { return sequencing::sequencing_fitness(x, instance); };
  auto result = swarm::run_search(config, space, fitness);

  SequencingOutcome out;
  out.sequence = encoding::multiple_random_keys_decode(result.best_position, instance.production_levels);
  out.evaluation = sequencing::evaluate_sequence(out.sequence, instance);
  out.iuc = result.iterations_until_convergence;
  return out;
}

inline SequencingOutcome solve_sequencing_for(const balancing::BalancingSolution& balance,
                                              const balancing::BalancingInstance& instance, double station_length,
                                              const OptimizerConfig& config, double lower_bound = -1000.0,
                                              double upper_bound = 1000.0) {
  return solve_sequencing(sequencing::derive_process_times(balance, instance, station_length), config, lower_bound,
                          upper_bound);
}

inline double metric_value(SelectionMetric metric, double cw, double ratio) {
  return metric == SelectionMetric::CompletedWork ? cw : ratio;
}

/// Full flow. Candidate c is sequenced with seed sequencing_seed + c; ties in the selection
/// metric keep the earlier (better balanced) candidate.
inline PipelineReport run_simultaneous(const balancing::BalancingInstance& instance, const PipelineConfig& config) {
  auto stage = solve_balancing_topn(instance, config.balancing_search, config.archive_n, config.lower_bound,
                                    config.upper_bound);
  const std::uint64_t seq_seed = swarm::seed_of(config.sequencing_search);

  PipelineReport report;
  for (std::size_t c = 0; c < stage.candidates.size(); ++c) {
    auto cfg = swarm::with_seed(config.sequencing_search, seq_seed + c);
    auto out = solve_sequencing_for(stage.candidates[c], instance, config.station_length, cfg, config.lower_bound,
                                    config.upper_bound);
    CandidateRecord rec;
    rec.balance = stage.candidates[c];
    rec.sequence = std::move(out.sequence);
    rec.completed_work = out.evaluation.total_completed_work;
    rec.workload = out.evaluation.total_workload;
    rec.cw_wl_ratio = out.evaluation.completion_ratio();
    rec.iuc_sequencing = out.iuc;
    report.candidates.push_back(std::move(rec));
  }

  for (std::size_t c = 1; c < report.candidates.size(); ++c) {
    const auto& a = report.candidates[c];
    const auto& b = report.candidates[report.selected];
    if (metric_value(config.selection_metric, a.completed_work, a.cw_wl_ratio) >
        metric_value(config.selection_metric, b.completed_work, b.cw_wl_ratio))
      report.selected = c;
  }

  const auto& chosen = report.candidates.at(report.selected);
  report.best.balance = chosen.balance;
  report.best.sequence = chosen.sequence;
  report.best.completed_work = chosen.completed_work;
  report.best.workload = chosen.workload;
  report.best.cw_wl_ratio = chosen.cw_wl_ratio;
  report.best.iuc_balancing = stage.iuc;
  report.best.iuc_sequencing = chosen.iuc_sequencing;
  return report;
}

}  // namespace mmal::pipeline
