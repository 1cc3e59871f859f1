#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mmal/error.hpp"
#include "mmal/io/experiment.hpp"
#include "mmal/io/text.hpp"

namespace mmal::io {

inline constexpr std::string_view kResultsHeader = "run_id,algorithm,instance,seed,CW,WL,WP,IUC_bal,IUC_seq,wall_time_ms";
inline constexpr std::string_view kStatsHeader =
    "output,algorithm,groups,mean,half_width,ci_lower,ci_upper,confidence,f_statistic,df_between,df_within,f_critical";
inline constexpr std::string_view kGroupMeansHeader = "output,algorithm,group,mean";

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Splits one CSV line, honouring double-quoted fields.
inline std::vector<std::string> csv_split(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError(line_no, "unterminated quoted field");
  return fields;
}

}  // namespace detail

inline std::string results_csv(const std::vector<ExperimentRecord>& records) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.run_id) + ',' + detail::csv_field(r.algorithm) + ',' + detail::csv_field(r.instance) + ',' +
           std::to_string(r.seed) + ',' + format_decimal(r.cw) + ',' + format_decimal(r.wl) + ',' +
           std::to_string(r.wp) + ',' + std::to_string(r.iuc_bal) + ',' + std::to_string(r.iuc_seq) + ',' +
           format_decimal(r.wall_time_ms, 3) + '\n';
  }
  return out;
}

inline std::vector<ExperimentRecord> parse_results_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != kResultsHeader) throw ParseError(1, "unexpected results header");
  std::vector<ExperimentRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto f = detail::csv_split(lines[i], i + 1);
    if (f.size() != 10) throw ParseError(i + 1, "expected 10 fields");
    auto whole = [&](const std::string& s) {
      auto v = to_integer(s);
      if (!v || *v < 0) throw ParseError(i + 1, "expected a non-negative integer, got '" + s + "'");
      return static_cast<std::size_t>(*v);
    };
    auto real = [&](const std::string& s) {
      auto v = to_double(s);
      if (!v) throw ParseError(i + 1, "expected a number, got '" + s + "'");
      return *v;
    };
    ExperimentRecord r;
    r.run_id = whole(f[0]);
    r.algorithm = f[1];
    r.instance = f[2];
    r.seed = whole(f[3]);
    r.cw = real(f[4]);
    r.wl = real(f[5]);
    r.wp = whole(f[6]);
    r.iuc_bal = whole(f[7]);
    r.iuc_seq = whole(f[8]);
    r.wall_time_ms = real(f[9]);
    records.push_back(std::move(r));
  }
  return records;
}

inline void write_results_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  if (records.empty()) throw IoError(path, "no records to write");
  write_file(path, results_csv(records));
}

inline std::vector<ExperimentRecord> read_results_csv(const std::string& path) {
  return parse_results_csv(read_file(path));
}

/// One row per (output, algorithm): pooled interval plus the output's ANOVA line.
inline std::string stats_csv(const std::vector<OutputStats>& stats) {
  std::string out(kStatsHeader);
  out += '\n';
  for (const auto& s : stats) {
    for (std::size_t a = 0; a < s.algorithms.size(); ++a) {
      const auto& ci = s.intervals[a];
      out += detail::csv_field(s.output) + ',' + detail::csv_field(s.algorithms[a]) + ',' +
             std::to_string(s.group_means[a].size()) + ',' + format_decimal(ci.mean) + ',' +
             format_decimal(ci.half_width) + ',' + format_decimal(ci.lower()) + ',' + format_decimal(ci.upper()) + ',' +
             format_exact(s.confidence) + ',' + format_decimal(s.anova.f_statistic) + ',' +
             std::to_string(s.anova.df_between) + ',' + std::to_string(s.anova.df_within) + ',' +
             format_decimal(s.f_critical) + '\n';
    }
  }
  return out;
}

inline std::string group_means_csv(const std::vector<OutputStats>& stats) {
  std::string out(kGroupMeansHeader);
  out += '\n';
  for (const auto& s : stats)
    for (std::size_t a = 0; a < s.algorithms.size(); ++a)
      for (std::size_t g = 0; g < s.group_means[a].size(); ++g)
        out += detail::csv_field(s.output) + ',' + detail::csv_field(s.algorithms[a]) + ',' + std::to_string(g) + ',' +
               format_decimal(s.group_means[a][g]) + '\n';
  return out;
}

inline void write_stats_csv(const std::vector<OutputStats>& stats, const std::string& path) {
  write_file(path, stats_csv(stats));
}

inline void write_group_means_csv(const std::vector<OutputStats>& stats, const std::string& path) {
  write_file(path, group_means_csv(stats));
}

}  // namespace mmal::io
