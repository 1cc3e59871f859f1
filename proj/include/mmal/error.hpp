#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmal {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A task cannot be placed on any workplace, even an empty one.
class InfeasibleTaskError : public Error {
 public:
  InfeasibleTaskError(std::size_t task, double time, double cycle_time)
      : Error("task " + std::to_string(task + 1) + " needs " + std::to_string(time) +
              " time units but the cycle time is " + std::to_string(cycle_time)),
        task_(task) {}

  std::size_t task() const noexcept { return task_; }

 private:
  std::size_t task_;
};

/// Malformed input text. Line numbers are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Precedence relation contains a cycle. The cycle is reported with 0-based task ids,
/// the message uses 1-based ids.
class CycleError : public Error {
 public:
  explicit CycleError(std::vector<std::size_t> cycle) : Error(describe(cycle)), cycle_(std::move(cycle)) {}

  const std::vector<std::size_t>& cycle() const noexcept { return cycle_; }

 private:
  static std::string describe(const std::vector<std::size_t>& cycle) {
    std::string text = "precedence cycle:";
    for (auto t : cycle) text += " " + std::to_string(t + 1) + " ->";
    if (!cycle.empty()) text += " " + std::to_string(cycle.front() + 1);
    return text;
  }

  std::vector<std::size_t> cycle_;
};

/// File system failures, always carrying the offending path.
class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what) : Error(path + ": " + what) {}
};

}  // namespace mmal
