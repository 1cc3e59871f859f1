#pragma once

// Batch experiments: repetitions x algorithms pipeline runs, per-run records, and the
// grouped-means / ANOVA / pooled-interval analysis over them.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mmal/balancing.hpp"
#include "mmal/pipeline.hpp"
#include "mmal/stats.hpp"
#include "mmal/swarm/search.hpp"

namespace mmal::io {

struct ExperimentRecord {
  std::size_t run_id = 0;
  std::string algorithm;
  std::string instance;
  std::uint64_t seed = 0;
  double cw = 0.0;
  double wl = 0.0;
  std::size_t wp = 0;
  std::size_t iuc_bal = 0;
  std::size_t iuc_seq = 0;
  double wall_time_ms = 0.0;

  double cw_wl_ratio() const { return wl > 0.0 ? cw / wl : 1.0; }
  bool operator==(const ExperimentRecord&) const = default;
};

struct ExperimentOptions {
  std::size_t population = 30;
  std::size_t balancing_iterations = 1000;
  std::size_t sequencing_iterations = 1000;
  std::size_t archive_n = 10;
  double station_length = 0.95;
  pipeline::SelectionMetric selection_metric = pipeline::SelectionMetric::CompletedWork;
  std::size_t group_size = 15;
  double confidence = 0.95;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 1;
};

struct RunFailure {
  std::size_t run_id = 0;
  std::string algorithm;
  std::string message;
};

/// Analysis of one output column across algorithms.
struct OutputStats {
  std::string output;
  std::vector<std::string> algorithms;
  /// group_means[a] = sample means of algorithm a.
  std::vector<std::vector<double>> group_means;
  stats::AnovaResult anova;
  double f_critical = 0.0;
  double confidence = 0.95;
  std::vector<stats::ConfidenceInterval> intervals;
};

struct ExperimentReport {
  std::vector<ExperimentRecord> records;
  /// Workstation count of each record's balance, parallel to `records`.
  std::vector<std::size_t> workstations;
  std::vector<RunFailure> failures;
  std::vector<OutputStats> stats;
  /// Why `stats` is empty, when it is.
  std::string stats_note;
};

/// Output columns analysed by run_experiment, in report order.
inline const std::vector<std::pair<std::string, std::function<double(const ExperimentRecord&)>>>& analysed_outputs() {
  static const std::vector<std::pair<std::string, std::function<double(const ExperimentRecord&)>>> outputs = {
      {"CW", [](const ExperimentRecord& r) { return r.cw; }},
      {"WL", [](const ExperimentRecord& r) { return r.wl; }},
      {"WP", [](const ExperimentRecord& r) { return static_cast<double>(r.wp); }},
      {"CW/WL", [](const ExperimentRecord& r) { return r.cw_wl_ratio(); }},
      {"IUC_bal", [](const ExperimentRecord& r) { return static_cast<double>(r.iuc_bal); }},
      {"IUC_seq", [](const ExperimentRecord& r) { return static_cast<double>(r.iuc_seq); }},
  };
  return outputs;
}

/// Grouped means, ANOVA and pooled intervals for every analysed output. `per_algorithm[a]`
/// holds algorithm a's records in repetition order.
inline std::vector<OutputStats> analyse(const std::vector<std::string>& algorithms,
                                        const std::vector<std::vector<ExperimentRecord>>& per_algorithm,
                                        std::size_t group_size, double confidence) {
  std::vector<OutputStats> out;
  for (const auto& [name, column] : analysed_outputs()) {
    OutputStats s;
    s.output = name;
    s.algorithms = algorithms;
    s.confidence = confidence;
    stats::GroupedSamples groups;
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      std::vector<double> raw;
      for (const auto& r : per_algorithm[a]) raw.push_back(column(r));
      s.group_means.push_back(stats::group_sample_means(raw, group_size));
      groups.push_back({algorithms[a], s.group_means.back()});
    }
    s.anova = stats::anova_oneway(groups);
    s.f_critical = stats::f_quantile(confidence, static_cast<double>(s.anova.df_between),
                                     static_cast<double>(s.anova.df_within));
    s.intervals = stats::pooled_confidence_intervals(groups, confidence);
    out.push_back(std::move(s));
  }
  return out;
}

/// Runs every algorithm `repetitions` times; records come out ordered by run_id, then algorithm. Repetition r of every algorithm has run_id r and
/// seed base_seed + r, so algorithms are compared on common seeds. A failing run is reported
/// in `failures` and does not stop the batch. Statistics need at least two algorithms, no
/// failures, and at least two full groups per algorithm.
inline ExperimentReport run_experiment(const balancing::BalancingInstance& instance, const std::string& instance_name,
                                       std::span<const swarm::Algorithm> algorithms, std::size_t repetitions,
                                       std::uint64_t base_seed, const ExperimentOptions& options = {}) {
  struct Slot {
    std::optional<ExperimentRecord> record;
    std::size_t workstations = 0;
    std::string error;
  };
  const std::size_t total = algorithms.size() * repetitions;
  std::vector<Slot> slots(total);

  auto run_one = [&](std::size_t index) {
    const swarm::Algorithm algorithm = algorithms[index / repetitions];
    const std::size_t run_id = index % repetitions;
    const std::uint64_t seed = base_seed + run_id;
    try {
      const auto started = std::chrono::steady_clock::now();
      pipeline::PipelineConfig cfg;
      cfg.balancing_search =
          swarm::make_optimizer_config(algorithm, options.population, options.balancing_iterations, seed);
      cfg.sequencing_search =
          swarm::make_optimizer_config(algorithm, options.population, options.sequencing_iterations, seed);
      cfg.archive_n = options.archive_n;
      cfg.station_length = options.station_length;
      cfg.selection_metric = options.selection_metric;
      const auto report = pipeline::run_simultaneous(instance, cfg);
      const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started);

      ExperimentRecord rec;
      rec.run_id = run_id;
      rec.algorithm = std::string(swarm::to_string(algorithm));
      rec.instance = instance_name;
      rec.seed = seed;
      rec.cw = report.best.completed_work;
      rec.wl = report.best.workload;
      rec.wp = report.best.balance.num_workplaces();
      rec.iuc_bal = report.best.iuc_balancing;
      rec.iuc_seq = report.best.iuc_sequencing;
      rec.wall_time_ms = elapsed.count();
      slots[index].record = std::move(rec);
      slots[index].workstations = report.best.balance.num_workstations;
    } catch (const std::exception& e) {
      slots[index].error = e.what();
    }
  };

  std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min(threads, std::max<std::size_t>(total, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < total; i = next++) run_one(i);
      });
  }

  ExperimentReport report;
  std::vector<std::vector<ExperimentRecord>> per_algorithm(algorithms.size());
  for (std::size_t run = 0; run < repetitions; ++run) {
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      auto& slot = slots[a * repetitions + run];
      if (slot.record) {
        per_algorithm[a].push_back(*slot.record);
        report.records.push_back(std::move(*slot.record));
        report.workstations.push_back(slot.workstations);
      } else {
        report.failures.push_back({run, std::string(swarm::to_string(algorithms[a])), slot.error});
      }
    }
  }

  if (algorithms.size() < 2)
    report.stats_note = "statistics need at least two algorithms";
  else if (!report.failures.empty())
    report.stats_note = "statistics skipped: some runs failed";
  else if (options.group_size == 0 || repetitions % options.group_size != 0 || repetitions / options.group_size < 2)
    report.stats_note = "statistics need the repetitions to split into at least two full groups";
  else {
    std::vector<std::string> names;
    for (auto a : algorithms) names.emplace_back(swarm::to_string(a));
    report.stats = analyse(names, per_algorithm, options.group_size, options.confidence);
  }
  return report;
}

}  // namespace mmal::io
