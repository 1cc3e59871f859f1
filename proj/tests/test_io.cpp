#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace mmal;
using namespace mmal::io;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "mmal_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::size_t parse_error_line(std::string_view text) {
  try {
    parse_alb(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Alb, TwoTasks) {
  auto alb = parse_alb("2\n5\n7\n1,2\n-1,-1\n10\n");
  EXPECT_EQ(alb.num_tasks(), 2u);
  EXPECT_EQ(alb.task_times, (std::vector<double>{5, 7}));
  EXPECT_EQ(alb.precedence_pairs, (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(alb.cycle_time, 10.0);
}

TEST(Alb, NoPrecedence) {
  auto alb = parse_alb("3\n1\n2\n3\n-1,-1\n9\n");
  EXPECT_TRUE(alb.precedence_pairs.empty());
}

TEST(Alb, LenientLayout) {
  auto alb = parse_alb("\n 2\r\n5\n\n7\n1 2\n-1,-1\n10\ntrailing section\nignored\n");
  EXPECT_EQ(alb.precedence_pairs, (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(alb.cycle_time, 10.0);
}

TEST(Alb, Cycle) {
  try {
    parse_alb("2\n5\n7\n1,2\n2,1\n-1,-1\n10\n");
    FAIL() << "expected a cycle error";
  } catch (const CycleError& e) {
    EXPECT_EQ(e.cycle().size(), 2u);
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
}

TEST(Alb, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("x\n"), 1u);
  EXPECT_EQ(parse_error_line("2\n5\nseven\n"), 3u);
  EXPECT_EQ(parse_error_line("2\n5\n7\n1,3\n-1,-1\n10\n"), 4u);
  EXPECT_EQ(parse_error_line("2\n5\n7\n1;2\n"), 4u);
  EXPECT_EQ(parse_error_line("2\n5\n7\n-1,-1\n0\n"), 5u);
  EXPECT_EQ(parse_error_line("2\n5\n7\n"), 4u);
}

TEST(Alb, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto alb = generate_base_alb(5 + seed, 1000, seed);
    alb.task_times[0] = 12.375;
    EXPECT_EQ(parse_alb(serialize_alb(alb)), alb);
  }
  const auto path = (temp_dir() / "base.alb").string();
  auto alb = generate_base_alb(20, 1000, 3);
  write_alb(alb, path);
  EXPECT_EQ(read_alb(path), alb);
  EXPECT_THROW(read_alb((temp_dir() / "missing.alb").string()), IoError);
}

TEST(MixedModel, PlanAndDeterminism) {
  auto base = generate_base_alb(20, 1000, 1);
  auto a = generate_mixed_model(base, 50, 998, 7);
  auto b = generate_mixed_model(base, 50, 998, 7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.plan_size(), 998u);
  EXPECT_EQ(a.num_models(), 50u);
  for (auto p : a.production_levels) EXPECT_GE(p, 1u);
  for (const auto& row : a.model_time_factors)
    for (double f : row) {
      EXPECT_GE(f, 0.8);
      EXPECT_LE(f, 1.2);
    }
  for (auto z : a.zones) {
    EXPECT_GE(z, 1u);
    EXPECT_LE(z, 4u);
  }
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.displacement[i][i], 0.0);
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_EQ(a.displacement[i][j], a.displacement[j][i]);
      EXPECT_LE(a.displacement[i][j], 50.0);
      EXPECT_GE(a.displacement[i][j], 0.0);
    }
  }
  EXPECT_NE(generate_mixed_model(base, 50, 998, 8), a);
}

TEST(MixedModel, SingleModel) {
  auto base = generate_base_alb(6, 1000, 2);
  auto spec = generate_mixed_model(base, 1, 998, 4);
  EXPECT_EQ(spec.production_levels, std::vector<std::size_t>{998});
  auto inst = to_balancing_instance(spec, 3);
  for (std::size_t j = 0; j < 6; ++j)
    EXPECT_NEAR(inst.mean_times[j], base.task_times[j] * spec.model_time_factors[0][j], 1e-9);
}

TEST(MixedModel, Rejections) {
  auto base = generate_base_alb(4, 1000, 2);
  EXPECT_THROW(generate_mixed_model(base, 0, 10, 1), std::invalid_argument);
  EXPECT_THROW(generate_mixed_model(base, 5, 4, 1), std::invalid_argument);
}

TEST(MixedModel, TextRoundTrip) {
  auto spec = generate_mixed_model(generate_base_alb(12, 1000, 5), 7, 100, 9);
  EXPECT_EQ(parse_mixed_model(serialize_mixed_model(spec)), spec);
  const auto path = (temp_dir() / "spec.txt").string();
  write_mixed_model(spec, path);
  EXPECT_EQ(read_mixed_model(path), spec);
}

TEST(MixedModel, ParseErrors) {
  auto text = serialize_mixed_model(generate_mixed_model(generate_base_alb(4, 1000, 5), 2, 10, 9));
  auto broken = text;
  broken.replace(broken.find("[zones]"), 7, "[zonez]");
  EXPECT_THROW(parse_mixed_model(broken), ParseError);
  auto bad_zone = text;
  const auto at = bad_zone.find("task_zones = ") + 13;
  bad_zone.replace(at, 1, "9");
  EXPECT_THROW(parse_mixed_model(bad_zone), ParseError);
}

TEST(Text, DecimalFormatting) {
  EXPECT_EQ(format_decimal(4496.5119), "4496.5119");
  EXPECT_EQ(format_decimal(6.0), "6.0000");
  EXPECT_EQ(format_decimal(0.1 + 0.2), "0.30000000000000004");
  EXPECT_EQ(format_fixed(0.98765432), "0.9877");
}

TEST(Csv, RoundTrip) {
  std::vector<ExperimentRecord> records{
      {0, "fss-v", "n=20_50", 11, 4496.5119, 4550.25, 6, 241, 0, 12.5},
      {1, "pso", "odd, \"name\"", 12, 1.0 / 3.0, 2.0, 7, 0, 3, 0.001},
  };
  const auto text = results_csv(records);
  EXPECT_EQ(text.substr(0, text.find('\n')), kResultsHeader);
  EXPECT_NE(text.find(",4496.5119,"), std::string::npos);
  EXPECT_EQ(parse_results_csv(text), records);
  const auto path = (temp_dir() / "results.csv").string();
  write_results_csv({records[0]}, path);
  const auto back = read_results_csv(path);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], records[0]);
  const auto written = read_file(path);
  EXPECT_EQ(std::count(written.begin(), written.end(), '\n'), 2);
  EXPECT_THROW(write_results_csv({}, path), IoError);
  EXPECT_THROW(parse_results_csv("bad header\n"), ParseError);
}

TEST(Experiment, SingleRepetitionHasNoStats) {
  auto spec = generate_mixed_model(generate_base_alb(8, 1000, 1), 3, 12, 2);
  auto inst = to_balancing_instance(spec, 3);
  ExperimentOptions opt;
  opt.population = 8;
  opt.balancing_iterations = 10;
  opt.sequencing_iterations = 5;
  opt.archive_n = 2;
  const std::vector<swarm::Algorithm> algs(std::begin(swarm::kAllAlgorithms), std::end(swarm::kAllAlgorithms));
  auto report = run_experiment(inst, "tiny", algs, 1, 100, opt);
  EXPECT_EQ(report.records.size(), 4u);
  EXPECT_TRUE(report.stats.empty());
  EXPECT_FALSE(report.stats_note.empty());
}

TEST(Experiment, OrderSeedsAndStats) {
  auto spec = generate_mixed_model(generate_base_alb(8, 1000, 1), 3, 12, 2);
  auto inst = to_balancing_instance(spec, 3);
  ExperimentOptions opt;
  opt.population = 8;
  opt.balancing_iterations = 10;
  opt.sequencing_iterations = 5;
  opt.archive_n = 2;
  opt.group_size = 2;
  opt.threads = 3;
  const std::vector<swarm::Algorithm> algs{swarm::Algorithm::FssVanilla, swarm::Algorithm::Pso};
  auto report = run_experiment(inst, "tiny", algs, 4, 100, opt);
  ASSERT_EQ(report.records.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(report.records[i].run_id, i / 2);
    EXPECT_EQ(report.records[i].seed, 100 + i / 2);
    EXPECT_EQ(report.records[i].algorithm, i % 2 == 0 ? "fss-v" : "pso");
    EXPECT_LE(report.records[i].cw, report.records[i].wl + 1e-9);
    EXPECT_GE(report.records[i].wp, report.workstations[i]);
  }
  ASSERT_EQ(report.stats.size(), analysed_outputs().size());
  for (const auto& s : report.stats) {
    EXPECT_EQ(s.anova.df_between, 1u);
    EXPECT_EQ(s.anova.df_within, 2u);
    EXPECT_EQ(s.group_means[0].size(), 2u);
  }
  opt.threads = 1;
  auto again = run_experiment(inst, "tiny", algs, 4, 100, opt);
  for (std::size_t i = 0; i < 8; ++i) {
    auto a = report.records[i], b = again.records[i];
    a.wall_time_ms = b.wall_time_ms = 0;
    EXPECT_EQ(a, b);
  }
}

TEST(Experiment, IdenticalRoutinesGiveIdenticalColumns) {
  auto spec = generate_mixed_model(generate_base_alb(8, 1000, 4), 3, 12, 2);
  auto inst = to_balancing_instance(spec, 2);
  ExperimentOptions opt;
  opt.population = 8;
  opt.balancing_iterations = 10;
  opt.sequencing_iterations = 5;
  opt.archive_n = 2;
  const std::vector<swarm::Algorithm> algs{swarm::Algorithm::FssSar, swarm::Algorithm::FssSar};
  auto report = run_experiment(inst, "tiny", algs, 2, 5, opt);
  ASSERT_EQ(report.records.size(), 4u);
  for (std::size_t r = 0; r < 2; ++r) {
    auto a = report.records[2 * r], b = report.records[2 * r + 1];
    a.wall_time_ms = b.wall_time_ms = 0;
    EXPECT_EQ(a, b);
  }
}
