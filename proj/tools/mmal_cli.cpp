// Command-line front end: generate instances, solve once, run batch experiments, inspect decodes.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "mmal/mmal.hpp"

namespace {

using namespace mmal;

struct SolverFlags {
  std::string spec_path;
  std::string name;
  std::uint64_t seed = 1;
  std::size_t iterations = 1000;
  std::size_t seq_iterations = 0;  // 0: same as iterations
  std::size_t school_size = 30;
  std::size_t archive_n = 10;
  double station_length = 0.95;
  std::size_t max_workplaces = 3;
  std::string metric = "cw";
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--spec", f.spec_path, "Mixed-model instance file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--name", f.name, "Instance label for the records (default: file stem)");
  cmd->add_option("--seed", f.seed, "Base random seed")->capture_default_str();
  cmd->add_option("--iterations", f.iterations, "Iterations per search")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seq-iterations", f.seq_iterations, "Sequencing iterations (default: --iterations)");
  cmd->add_option("--school-size", f.school_size, "Fish / particles per search")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--archive-n", f.archive_n, "Distinct balances handed to sequencing")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--L", f.station_length, "Station length in cycle-time units")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--max-workplaces", f.max_workplaces, "Workplaces per workstation")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--metric", f.metric, "Combination selection metric")
      ->capture_default_str()
      ->check(CLI::IsMember({"cw", "ratio"}));
}

pipeline::SelectionMetric metric_of(const SolverFlags& f) {
  return f.metric == "ratio" ? pipeline::SelectionMetric::CwWlRatio : pipeline::SelectionMetric::CompletedWork;
}

std::string label_of(const SolverFlags& f) {
  return f.name.empty() ? std::filesystem::path(f.spec_path).stem().string() : f.name;
}

void print_balance(const balancing::BalancingSolution& b, std::ostream& os) {
  os << "workstations " << b.num_workstations << ", workplaces " << b.num_workplaces() << ", objective "
     << io::format_fixed(-b.fitness) << "\n";
  for (std::size_t k = 0; k < b.workplaces.size(); ++k) {
    const auto& w = b.workplaces[k];
    os << "  station " << w.workstation + 1 << " workplace " << k + 1 << "  load " << io::format_fixed(w.load, 2)
       << "  tasks";
    for (auto t : w.tasks) os << ' ' << t + 1;
    os << "\n";
  }
}

void print_sequence_head(const encoding::ModelSequence& s, std::ostream& os, std::size_t limit = 40) {
  os << "sequence (" << s.slots.size() << " units):";
  for (std::size_t i = 0; i < s.slots.size() && i < limit; ++i) os << ' ' << s.slots[i] + 1;
  if (s.slots.size() > limit) os << " ...";
  os << "\n";
}

std::vector<double> parse_keys(const std::string& text) {
  std::vector<double> keys;
  std::string token;
  for (char c : text + ",") {
    if (c == ',' || c == ' ') {
      if (!token.empty()) {
        auto v = io::to_double(token);
        if (!v) throw std::invalid_argument("bad key '" + token + "'");
        keys.push_back(*v);
        token.clear();
      }
    } else {
      token += c;
    }
  }
  return keys;
}

std::vector<double> random_keys(std::size_t n, std::uint64_t seed) {
  swarm::Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform(-1000.0, 1000.0);
  return x;
}

int cmd_generate(const std::string& alb_path, std::size_t tasks, std::size_t models, std::size_t plan_size,
                 double cycle_time, std::uint64_t seed, const io::MixedModelOptions& options, const std::string& out,
                 const std::string& alb_out) {
  io::AlbFile base = alb_path.empty() ? io::generate_base_alb(tasks, cycle_time, seed) : io::read_alb(alb_path);
  if (!alb_out.empty()) io::write_alb(base, alb_out);
  auto spec = io::generate_mixed_model(base, models, plan_size, seed, options);
  io::write_mixed_model(spec, out);
  std::cout << "wrote " << out << ": " << base.num_tasks() << " tasks, " << models << " models, plan of "
            << spec.plan_size() << " units\n";
  return 0;
}

int cmd_solve(const SolverFlags& f, swarm::Algorithm algorithm, const std::string& out) {
  auto spec = io::read_mixed_model(f.spec_path);
  auto instance = io::to_balancing_instance(spec, f.max_workplaces);

  pipeline::PipelineConfig cfg;
  cfg.balancing_search = swarm::make_optimizer_config(algorithm, f.school_size, f.iterations, f.seed);
  cfg.sequencing_search =
      swarm::make_optimizer_config(algorithm, f.school_size, f.seq_iterations ? f.seq_iterations : f.iterations, f.seed);
  cfg.archive_n = f.archive_n;
  cfg.station_length = f.station_length;
  cfg.selection_metric = metric_of(f);

  const auto started = std::chrono::steady_clock::now();
  auto report = pipeline::run_simultaneous(instance, cfg);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

  std::cout << "candidates\n";
  for (std::size_t c = 0; c < report.candidates.size(); ++c) {
    const auto& r = report.candidates[c];
    std::cout << (c == report.selected ? " * " : "   ") << c + 1 << "  WP " << r.balance.num_workplaces() << "  CW "
              << io::format_fixed(r.completed_work) << "  WL " << io::format_fixed(r.workload) << "  CW/WL "
              << io::format_fixed(r.cw_wl_ratio) << "\n";
  }
  const auto& best = report.best;
  std::cout << "\nbest combination\n";
  print_balance(best.balance, std::cout);
  print_sequence_head(best.sequence, std::cout);
  std::cout << "CW " << io::format_fixed(best.completed_work) << "  WL " << io::format_fixed(best.workload)
            << "  CW/WL " << io::format_fixed(best.cw_wl_ratio) << "  IUC_bal " << best.iuc_balancing << "  IUC_seq "
            << best.iuc_sequencing << "\n";

  if (!out.empty()) {
    io::ExperimentRecord rec{0,
                             std::string(swarm::to_string(algorithm)),
                             label_of(f),
                             f.seed,
                             best.completed_work,
                             best.workload,
                             best.balance.num_workplaces(),
                             best.iuc_balancing,
                             best.iuc_sequencing,
                             ms};
    io::write_results_csv({rec}, out);
  }
  return 0;
}

int cmd_experiment(const SolverFlags& f, const std::vector<std::string>& algorithm_names, std::size_t repetitions,
                   std::size_t group_size, std::size_t threads, const std::string& out_dir) {
  auto spec = io::read_mixed_model(f.spec_path);
  auto instance = io::to_balancing_instance(spec, f.max_workplaces);
  std::vector<swarm::Algorithm> algorithms;
  for (const auto& name : algorithm_names) algorithms.push_back(swarm::parse_algorithm(name));
  if (algorithms.empty()) algorithms.assign(std::begin(swarm::kAllAlgorithms), std::end(swarm::kAllAlgorithms));

  io::ExperimentOptions options;
  options.population = f.school_size;
  options.balancing_iterations = f.iterations;
  options.sequencing_iterations = f.seq_iterations ? f.seq_iterations : f.iterations;
  options.archive_n = f.archive_n;
  options.station_length = f.station_length;
  options.selection_metric = metric_of(f);
  options.group_size = group_size;
  options.threads = threads;

  auto report = io::run_experiment(instance, label_of(f), algorithms, repetitions, f.seed, options);

  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  if (!report.records.empty()) io::write_results_csv(report.records, (dir / "results.csv").string());
  if (!report.failures.empty()) {
    std::string text = "run_id,algorithm,message\n";
    for (const auto& e : report.failures)
      text += std::to_string(e.run_id) + "," + e.algorithm + "," + io::detail::csv_field(e.message) + "\n";
    io::write_file((dir / "failures.csv").string(), text);
    std::cerr << report.failures.size() << " run(s) failed, see " << (dir / "failures.csv").string() << "\n";
  }
  std::cout << report.records.size() << " runs written to " << (dir / "results.csv").string() << "\n";

  if (report.stats.empty()) {
    std::cout << report.stats_note << "\n";
    return report.failures.empty() ? 0 : 1;
  }
  io::write_stats_csv(report.stats, (dir / "stats.csv").string());
  io::write_group_means_csv(report.stats, (dir / "group_means.csv").string());
  for (const auto& s : report.stats) {
    std::cout << "\n" << s.output << ": F = " << io::format_fixed(s.anova.f_statistic) << " (df " << s.anova.df_between
              << ", " << s.anova.df_within << "; F crit " << io::format_fixed(s.f_critical) << ")\n";
    for (std::size_t a = 0; a < s.algorithms.size(); ++a)
      std::cout << "  " << s.algorithms[a] << "  " << io::format_fixed(s.intervals[a].mean) << " +- "
                << io::format_fixed(s.intervals[a].half_width) << "\n";
  }
  return report.failures.empty() ? 0 : 1;
}

int cmd_decode(const std::string& spec_path, std::size_t max_workplaces, double station_length,
               const std::string& keys_text, const std::string& seq_keys_text, std::uint64_t seed) {
  auto spec = io::read_mixed_model(spec_path);
  auto instance = io::to_balancing_instance(spec, max_workplaces);

  auto keys = keys_text.empty() ? random_keys(instance.num_tasks(), seed) : parse_keys(keys_text);
  auto perm = encoding::random_keys_decode(keys);
  std::cout << "task order:";
  for (auto t : perm.order) std::cout << ' ' << t + 1;
  std::cout << "\n";
  auto balance = balancing::decode_balancing(perm, instance);
  print_balance(balance, std::cout);

  auto seq_inst = sequencing::derive_process_times(balance, instance, station_length);
  auto seq_keys = seq_keys_text.empty() ? random_keys(seq_inst.total_jobs(), seed + 1) : parse_keys(seq_keys_text);
  auto seq = encoding::multiple_random_keys_decode(seq_keys, seq_inst.production_levels);
  auto eval = sequencing::evaluate_sequence(seq, seq_inst);
  print_sequence_head(seq, std::cout);
  std::cout << "CW " << io::format_fixed(eval.total_completed_work) << "  WL "
            << io::format_fixed(eval.total_workload) << "  CW/WL " << io::format_fixed(eval.completion_ratio())
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simultaneous mixed-model line balancing and sequencing with fish school search and PSO"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Build a mixed-model instance from an .alb file or at random");
  std::string alb_path, gen_out, alb_out;
  std::size_t gen_tasks = 20, gen_models = 50, plan_size = 998;
  double cycle_time = 1000.0;
  std::uint64_t gen_seed = 1;
  io::MixedModelOptions gen_options;
  auto* alb_opt = gen->add_option("--alb", alb_path, "Single-model .alb instance")->check(CLI::ExistingFile);
  gen->add_option("--tasks", gen_tasks, "Tasks of a random base instance (without --alb)")
      ->capture_default_str()
      ->excludes(alb_opt);
  gen->add_option("--cycle-time", cycle_time, "Cycle time of a random base instance")->capture_default_str();
  gen->add_option("--models", gen_models, "Number of models")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--plan-size", plan_size, "Units in the production plan")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--factor-min", gen_options.factor_min, "Lower model time factor")->capture_default_str();
  gen->add_option("--factor-max", gen_options.factor_max, "Upper model time factor")->capture_default_str();
  gen->add_option("--displacement-fraction", gen_options.displacement_fraction,
                  "Max displacement time as a fraction of the cycle time")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "Output instance file")->required();
  gen->add_option("--write-alb", alb_out, "Also write the base instance as .alb");

  // solve
  auto* solve = app.add_subcommand("solve", "One simultaneous balancing/sequencing run");
  SolverFlags solve_flags;
  std::string solve_algorithm = "fss-npss-sar", solve_out;
  add_solver_flags(solve, solve_flags);
  solve->add_option("--algorithm", solve_algorithm, "fss-v | fss-sar | fss-npss-sar | pso")
      ->capture_default_str()
      ->check(CLI::IsMember({"fss-v", "fss-sar", "fss-npss-sar", "pso"}));
  solve->add_option("--out", solve_out, "Write the run as a one-row results CSV");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Repeated runs per algorithm with ANOVA and pooled intervals");
  SolverFlags exp_flags;
  std::vector<std::string> exp_algorithms;
  std::size_t repetitions = 450, group_size = 15, threads = 1;
  std::string exp_out;
  add_solver_flags(exp, exp_flags);
  exp->add_option("--algorithm", exp_algorithms, "Algorithms to compare (repeatable; default: all)")
      ->check(CLI::IsMember({"fss-v", "fss-sar", "fss-npss-sar", "pso"}));
  exp->add_option("--repetitions", repetitions, "Runs per algorithm")->capture_default_str()->check(CLI::PositiveNumber);
  exp->add_option("--group-size", group_size, "Runs averaged into one ANOVA sample")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  exp->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
  exp->add_option("--out", exp_out, "Output directory")->required();

  // decode
  auto* dec = app.add_subcommand("decode", "Print the balance and sequence a pair of key vectors decode to");
  std::string dec_spec, dec_keys, dec_seq_keys;
  std::size_t dec_max_wp = 3;
  double dec_L = 0.95;
  std::uint64_t dec_seed = 1;
  dec->add_option("--spec", dec_spec, "Mixed-model instance file")->required()->check(CLI::ExistingFile);
  dec->add_option("--keys", dec_keys, "Balancing keys, comma separated (default: random)");
  dec->add_option("--seq-keys", dec_seq_keys, "Sequencing keys, comma separated (default: random)");
  dec->add_option("--seed", dec_seed, "Seed for random keys")->capture_default_str();
  dec->add_option("--max-workplaces", dec_max_wp, "Workplaces per workstation")->capture_default_str();
  dec->add_option("--L", dec_L, "Station length in cycle-time units")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen)
      return cmd_generate(alb_path, gen_tasks, gen_models, plan_size, cycle_time, gen_seed, gen_options, gen_out,
                          alb_out);
    if (*solve) return cmd_solve(solve_flags, swarm::parse_algorithm(solve_algorithm), solve_out);
    if (*exp) return cmd_experiment(exp_flags, exp_algorithms, repetitions, group_size, threads, exp_out);
    if (*dec) return cmd_decode(dec_spec, dec_max_wp, dec_L, dec_keys, dec_seq_keys, dec_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
