#pragma once

// Mixed-model instances: seeded synthesis from a single-model .alb file, a sectioned text
// format, and conversion into a balancing instance.
//
// File format (1-based task, model and zone ids; '#' starts a comment line):
//
//   [base]
//   tasks = 3
//   cycle_time = 1000
//   task_times = 120 340 95
//   precedence = 1,2 1,3
//
//   [plan]
//   models = 2
//   generator_seed = 42
//   production_levels = 600 398
//
//   [zones]
//   task_zones = 1 4 2
//
//   [displacement]
//   from1 = 0 12.5 30 8
//   ...                      one row per zone
//
//   [factors]
//   model1 = 1.05 0.93 1.18
//   ...                      one row per model, one factor per task

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mmal/balancing.hpp"
#include "mmal/error.hpp"
#include "mmal/io/alb.hpp"
#include "mmal/io/text.hpp"
#include "mmal/swarm/rng.hpp"

namespace mmal::io {

struct MixedModelSpec {
  AlbFile base;
  std::vector<std::size_t> production_levels;
  /// model_time_factors[m][j] scales the base time of task j for model m.
  std::vector<std::vector<double>> model_time_factors;
  /// 1-based zone per task.
  std::vector<std::size_t> zones;
  /// Square matrix, zones x zones.
  std::vector<std::vector<double>> displacement;
  std::uint64_t generator_seed = 0;

  std::size_t num_models() const { return production_levels.size(); }
  std::size_t plan_size() const {
    std::size_t s = 0;
    for (auto p : production_levels) s += p;
    return s;
  }
  bool operator==(const MixedModelSpec&) const = default;
};

struct MixedModelOptions {
  double factor_min = 0.8;
  double factor_max = 1.2;
  /// Off-diagonal displacement times are uniform in [0, fraction * cycle_time].
  double displacement_fraction = 0.05;
  std::size_t zones = balancing::kDefaultZones;
};

/// Deterministic in (base, models, plan_size, seed, options). Draw order: time factors (model by
/// model), production-level weights, zones, then the upper triangle of the displacement matrix.
/// Production levels are 1 + a largest-remainder share of plan_size - models, proportional to
/// weights uniform in [0, 1).
inline MixedModelSpec generate_mixed_model(const AlbFile& base, std::size_t models, std::size_t plan_size,
                                           std::uint64_t seed, const MixedModelOptions& options = {}) {
  if (models == 0) throw std::invalid_argument("at least one model is required");
  if (plan_size < models) throw std::invalid_argument("plan size must be at least the number of models");
  swarm::Rng rng(seed);
  MixedModelSpec spec;
  spec.base = base;
  spec.generator_seed = seed;

  spec.model_time_factors.assign(models, std::vector<double>(base.num_tasks()));
  for (auto& row : spec.model_time_factors)
    for (double& f : row) f = rng.uniform(options.factor_min, options.factor_max);

  std::vector<double> weights(models);
  double weight_sum = 0.0;
  for (double& w : weights) {
    w = rng.uniform01();
    weight_sum += w;
  }
  if (weight_sum == 0.0) {
    std::fill(weights.begin(), weights.end(), 1.0);
    weight_sum = static_cast<double>(models);
  }
  const std::size_t spare = plan_size - models;
  spec.production_levels.assign(models, 1);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t handed_out = 0;
  for (std::size_t m = 0; m < models; ++m) {
    const double share = static_cast<double>(spare) * weights[m] / weight_sum;
    const auto whole = static_cast<std::size_t>(std::floor(share));
    spec.production_levels[m] += whole;
    handed_out += whole;
    remainders.push_back({share - static_cast<double>(whole), m});
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; handed_out + i < spare; ++i) ++spec.production_levels[remainders[i % models].second];

  spec.zones.resize(base.num_tasks());
  for (auto& z : spec.zones) z = 1 + rng.index(options.zones);

  spec.displacement.assign(options.zones, std::vector<double>(options.zones, 0.0));
  for (std::size_t a = 0; a < options.zones; ++a)
    for (std::size_t b = a + 1; b < options.zones; ++b)
      spec.displacement[a][b] = spec.displacement[b][a] =
          rng.uniform(0.0, options.displacement_fraction * base.cycle_time);
  return spec;
}

/// Model m's time for task j is base_time[j] * factor[m][j]. Every model shares the base
/// precedence graph.
inline balancing::BalancingInstance to_balancing_instance(const MixedModelSpec& spec, std::size_t max_workplaces) {
  std::vector<balancing::ModelData> models;
  for (std::size_t m = 0; m < spec.num_models(); ++m) {
    balancing::ModelData md;
    md.production_level = spec.production_levels[m];
    for (std::size_t j = 0; j < spec.base.num_tasks(); ++j)
      md.task_times.push_back(spec.base.task_times[j] * spec.model_time_factors[m][j]);
    models.push_back(std::move(md));
  }
  balancing::DisplacementMatrix disp(spec.displacement.size());
  for (std::size_t a = 0; a < spec.displacement.size(); ++a)
    for (std::size_t b = 0; b < spec.displacement.size(); ++b) disp(a, b) = spec.displacement[a][b];
  std::vector<std::size_t> zones;
  for (auto z : spec.zones) {
    if (z == 0) throw std::invalid_argument("zones are 1-based");
    zones.push_back(z - 1);
  }
  std::vector<std::vector<Edge>> precedence(models.size(), spec.base.precedence_pairs);
  return balancing::make_instance(std::move(models), precedence, std::move(zones), std::move(disp),
                                  spec.base.cycle_time, max_workplaces);
}

// --- text format ------------------------------------------------------------------------------

namespace detail {

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    if constexpr (std::is_floating_point_v<T>)
      out += format_exact(values[i]);
    else
      out += std::to_string(values[i]);
  }
  return out;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

using Sections = std::map<std::string, std::map<std::string, Entry>, std::less<>>;

inline Sections read_sections(std::string_view text) {
  Sections sections;
  std::string current;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (sections.count(current)) throw ParseError(line_no, "duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    if (current.empty()) throw ParseError(line_no, "key outside of any section");
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    auto& section = sections[current];
    if (section.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    section[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no};
  }
  return sections;
}

class SectionReader {
 public:
  SectionReader(const Sections& sections, std::size_t eof_line) : sections_(sections), eof_line_(eof_line) {}

  const Entry& get(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) throw ParseError(eof_line_, "missing section [" + section + "]");
    auto k = s->second.find(key);
    if (k == s->second.end()) throw ParseError(eof_line_, "missing key '" + key + "' in [" + section + "]");
    return k->second;
  }

  long long integer(const std::string& section, const std::string& key) const {
    const auto& e = get(section, key);
    auto v = to_integer(e.value);
    if (!v) throw ParseError(e.line, "expected an integer for '" + key + "'");
    return *v;
  }

  std::vector<double> reals(const Entry& e, std::size_t expected) const {
    std::vector<double> out;
    for (auto tok : split_ws(e.value)) {
      auto v = to_double(tok);
      if (!v) throw ParseError(e.line, "expected a number, got '" + std::string(tok) + "'");
      out.push_back(*v);
    }
    if (out.size() != expected)
      throw ParseError(e.line, "expected " + std::to_string(expected) + " values, got " + std::to_string(out.size()));
    return out;
  }

  std::vector<std::size_t> counts(const Entry& e, std::size_t expected) const {
    std::vector<std::size_t> out;
    for (auto tok : split_ws(e.value)) {
      auto v = to_integer(tok);
      if (!v || *v < 0) throw ParseError(e.line, "expected a non-negative integer, got '" + std::string(tok) + "'");
      out.push_back(static_cast<std::size_t>(*v));
    }
    if (out.size() != expected)
      throw ParseError(e.line, "expected " + std::to_string(expected) + " values, got " + std::to_string(out.size()));
    return out;
  }

  std::size_t eof_line() const { return eof_line_; }

 private:
  const Sections& sections_;
  std::size_t eof_line_;
};

}  // namespace detail

inline std::string serialize_mixed_model(const MixedModelSpec& spec) {
  std::string out = "# mixed-model instance\n[base]\n";
  out += "tasks = " + std::to_string(spec.base.num_tasks()) + "\n";
  out += "cycle_time = " + format_exact(spec.base.cycle_time) + "\n";
  out += "task_times = " + detail::join(spec.base.task_times) + "\n";
  out += "precedence =";
  for (auto [a, b] : spec.base.precedence_pairs) out += " " + std::to_string(a + 1) + "," + std::to_string(b + 1);
  out += "\n\n[plan]\n";
  out += "models = " + std::to_string(spec.num_models()) + "\n";
  out += "generator_seed = " + std::to_string(spec.generator_seed) + "\n";
  out += "production_levels = " + detail::join(spec.production_levels) + "\n";
  out += "\n[zones]\ntask_zones = " + detail::join(spec.zones) + "\n";
  out += "\n[displacement]\n";
  for (std::size_t a = 0; a < spec.displacement.size(); ++a)
    out += "from" + std::to_string(a + 1) + " = " + detail::join(spec.displacement[a]) + "\n";
  out += "\n[factors]\n";
  for (std::size_t m = 0; m < spec.model_time_factors.size(); ++m)
    out += "model" + std::to_string(m + 1) + " = " + detail::join(spec.model_time_factors[m]) + "\n";
  return out;
}

inline MixedModelSpec parse_mixed_model(std::string_view text) {
  const auto sections = detail::read_sections(text);
  const detail::SectionReader r(sections, split_lines(text).size() + 1);
  MixedModelSpec spec;

  const auto tasks = r.integer("base", "tasks");
  if (tasks <= 0) throw ParseError(r.get("base", "tasks").line, "task count must be positive");
  const auto n = static_cast<std::size_t>(tasks);
  const auto& cycle = r.get("base", "cycle_time");
  auto c = to_double(cycle.value);
  if (!c || !(*c > 0.0)) throw ParseError(cycle.line, "cycle time must be a positive number");
  spec.base.cycle_time = *c;
  spec.base.task_times = r.reals(r.get("base", "task_times"), n);
  const auto& prec = r.get("base", "precedence");
  for (auto tok : split_ws(prec.value)) {
    auto pair = io::detail::parse_pair(tok);
    auto valid = [&](long long id) { return id >= 1 && static_cast<std::size_t>(id) <= n; };
    if (!pair || !valid(pair->first) || !valid(pair->second))
      throw ParseError(prec.line, "bad precedence pair '" + std::string(tok) + "'");
    spec.base.precedence_pairs.push_back(
        {static_cast<std::size_t>(pair->first - 1), static_cast<std::size_t>(pair->second - 1)});
  }
  require_acyclic(n, spec.base.precedence_pairs);

  const auto models = r.integer("plan", "models");
  if (models <= 0) throw ParseError(r.get("plan", "models").line, "model count must be positive");
  const auto I = static_cast<std::size_t>(models);
  const auto seed = r.integer("plan", "generator_seed");
  spec.generator_seed = static_cast<std::uint64_t>(seed);
  spec.production_levels = r.counts(r.get("plan", "production_levels"), I);

  const auto& zones_entry = r.get("zones", "task_zones");
  spec.zones = r.counts(zones_entry, n);

  auto disp_section = sections.find("displacement");
  if (disp_section == sections.end() || disp_section->second.empty())
    throw ParseError(r.eof_line(), "missing section [displacement]");
  const std::size_t Z = disp_section->second.size();
  for (std::size_t a = 0; a < Z; ++a)
    spec.displacement.push_back(r.reals(r.get("displacement", "from" + std::to_string(a + 1)), Z));
  for (auto z : spec.zones)
    if (z < 1 || z > Z) throw ParseError(zones_entry.line, "zone " + std::to_string(z) + " outside 1.." + std::to_string(Z));

  for (std::size_t m = 0; m < I; ++m)
    spec.model_time_factors.push_back(r.reals(r.get("factors", "model" + std::to_string(m + 1)), n));
  return spec;
}

inline MixedModelSpec read_mixed_model(const std::string& path) { return parse_mixed_model(read_file(path)); }

inline void write_mixed_model(const MixedModelSpec& spec, const std::string& path) {
  write_file(path, serialize_mixed_model(spec));
}

}  // namespace mmal::io
