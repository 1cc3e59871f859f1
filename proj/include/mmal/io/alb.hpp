#pragma once

// Single-model SALBP-style instance files:
//
//   line 1            number of tasks T
//   next T lines      task times
//   then              precedence pairs "a,b" (1-based), terminated by "-1,-1"
//   then              the cycle time
//
// Blank lines are skipped. Anything after the cycle time is ignored.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmal/error.hpp"
#include "mmal/io/text.hpp"
#include "mmal/precedence.hpp"
#include "mmal/swarm/rng.hpp"

namespace mmal::io {

struct AlbFile {
  std::vector<double> task_times;
  /// 0-based (predecessor, successor).
  std::vector<Edge> precedence_pairs;
  double cycle_time = 0.0;

  std::size_t num_tasks() const { return task_times.size(); }
  bool operator==(const AlbFile&) const = default;
};

namespace detail {

inline std::optional<std::pair<long long, long long>> parse_pair(std::string_view line) {
  auto comma = line.find(',');
  std::string_view a, b;
  if (comma != std::string_view::npos) {
    a = line.substr(0, comma);
    b = line.substr(comma + 1);
  } else {
    auto tokens = split_ws(line);
    if (tokens.size() != 2) return std::nullopt;
    a = tokens[0];
    b = tokens[1];
  }
  auto x = to_integer(a), y = to_integer(b);
  if (!x || !y) return std::nullopt;
  return std::pair{*x, *y};
}

}  // namespace detail

inline AlbFile parse_alb(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t at = 0;  // index into lines
  auto next_line = [&]() -> std::pair<std::string_view, std::size_t> {
    while (at < lines.size()) {
      auto line = trim(lines[at++]);
      if (!line.empty()) return {line, at};
    }
    throw ParseError(lines.size() + 1, "unexpected end of file");
  };

  AlbFile alb;
  auto [count_text, count_line] = next_line();
  auto count = to_integer(count_text);
  if (!count || *count <= 0) throw ParseError(count_line, "expected a positive task count");
  const auto n = static_cast<std::size_t>(*count);

  for (std::size_t j = 0; j < n; ++j) {
    auto [t, line_no] = next_line();
    auto time = to_double(t);
    if (!time || *time < 0.0 || !std::isfinite(*time)) throw ParseError(line_no, "expected a non-negative task time");
    alb.task_times.push_back(*time);
  }

  for (;;) {
    auto [line, line_no] = next_line();
    auto pair = detail::parse_pair(line);
    if (!pair) throw ParseError(line_no, "expected a precedence pair 'a,b' or the terminator '-1,-1'");
    if (pair->first == -1 && pair->second == -1) break;
    auto valid = [&](long long id) { return id >= 1 && static_cast<std::size_t>(id) <= n; };
    if (!valid(pair->first) || !valid(pair->second)) throw ParseError(line_no, "precedence pair references an unknown task");
    alb.precedence_pairs.push_back({static_cast<std::size_t>(pair->first - 1), static_cast<std::size_t>(pair->second - 1)});
  }

  auto [cycle_text, cycle_line] = next_line();
  auto cycle = to_double(cycle_text);
  if (!cycle || !(*cycle > 0.0) || !std::isfinite(*cycle)) throw ParseError(cycle_line, "expected a positive cycle time");
  alb.cycle_time = *cycle;

  require_acyclic(n, alb.precedence_pairs);
  return alb;
}

inline std::string serialize_alb(const AlbFile& alb) {
  std::string out = std::to_string(alb.num_tasks()) + "\n";
  for (double t : alb.task_times) out += format_exact(t) + "\n";
  for (auto [a, b] : alb.precedence_pairs) out += std::to_string(a + 1) + "," + std::to_string(b + 1) + "\n";
  out += "-1,-1\n";
  out += format_exact(alb.cycle_time) + "\n";
  return out;
}

inline AlbFile read_alb(const std::string& path) { return parse_alb(read_file(path)); }

inline void write_alb(const AlbFile& alb, const std::string& path) { write_file(path, serialize_alb(alb)); }

struct BaseGeneratorOptions {
  double min_time = 50.0;
  double max_time = 500.0;
  std::size_t max_predecessors = 2;
};

/// Random single-model instance: integer task times uniform in [min_time, max_time], and each
/// task j > 0 gets between 0 and max_predecessors distinct predecessors among tasks < j.
inline AlbFile generate_base_alb(std::size_t num_tasks, double cycle_time, std::uint64_t seed,
                                 const BaseGeneratorOptions& options = {}) {
  swarm::Rng rng(seed);
  AlbFile alb;
  alb.cycle_time = cycle_time;
  const auto span = static_cast<std::size_t>(options.max_time - options.min_time) + 1;
  for (std::size_t j = 0; j < num_tasks; ++j)
    alb.task_times.push_back(options.min_time + static_cast<double>(rng.index(span)));
  for (std::size_t j = 1; j < num_tasks; ++j) {
    const std::size_t k = rng.index(options.max_predecessors + 1);
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t p = rng.index(j);
      if (std::find(chosen.begin(), chosen.end(), p) == chosen.end()) chosen.push_back(p);
    }
    std::sort(chosen.begin(), chosen.end());
    for (auto p : chosen) alb.precedence_pairs.push_back({p, j});
  }
  return alb;
}

}  // namespace mmal::io
