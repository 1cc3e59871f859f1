#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mmal::swarm {

/// Maps a position to the discrete solution it represents. Two positions with equal keys are
/// the same solution as far as the archive is concerned.
using SolutionKey = std::function<std::vector<int>(std::span<const double>)>;

struct ArchiveEntry {
  std::vector<double> position;
  double fitness = 0.0;
  std::vector<int> key;
};

/// The best `capacity` pairwise-distinct solutions seen so far, best first (maximization).
/// Equal fitness keeps discovery order. Without a key function, distinctness is exact
/// position equality.
class SolutionArchive {
 public:
  explicit SolutionArchive(std::size_t capacity, SolutionKey key = {}) : capacity_(capacity), key_(std::move(key)) {}

  /// True if an entry with this fitness could enter the archive.
  bool admits(double fitness) const {
    return capacity_ > 0 && (entries_.size() < capacity_ || fitness > entries_.back().fitness);
  }

  void offer(std::span<const double> position, double fitness) {
    if (!admits(fitness)) return;
    std::vector<int> key = key_ ? key_(position) : std::vector<int>{};

    auto same = std::find_if(entries_.begin(), entries_.end(), [&](const ArchiveEntry& e) {
      return key_ ? e.key == key : std::equal(e.position.begin(), e.position.end(), position.begin(), position.end());
    });
    if (same != entries_.end()) {
      if (fitness <= same->fitness) return;
      entries_.erase(same);
    }

    auto at = std::upper_bound(entries_.begin(), entries_.end(), fitness,
                               [](double f, const ArchiveEntry& e) { return f > e.fitness; });
    entries_.insert(at, ArchiveEntry{{position.begin(), position.end()}, fitness, std::move(key)});
    if (entries_.size() > capacity_) entries_.pop_back();
  }

  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  std::vector<ArchiveEntry> release() { return std::move(entries_); }

 private:
  std::size_t capacity_;
  SolutionKey key_;
  std::vector<ArchiveEntry> entries_;
};

}  // namespace mmal::swarm
