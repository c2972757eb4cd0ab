#pragma once

#include <vector>

#include "grownet/numeric/bounded_box.hpp"
#include "grownet/numeric/rng.hpp"

namespace grownet::engine {

struct MemoryEntry {
  int task = 0;
  double meta_feature = 0.0;
  Vector best_point;
};

/// Per-task (meta-feature, best expansion point) store used to
/// warmstart the search for later tasks.
class EpisodicMemory {
public:
  void add(MemoryEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<MemoryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

private:
  std::vector<MemoryEntry> entries_;
};

/// Draws a uniform integer point from the (integer-valued) box.
Vector random_integer_point(const numeric::BoundedBox& bounds,
                            numeric::Rng& rng);

/// The m stored points closest to `meta_feature` by L1 distance, ties
/// broken toward the most recent task; padded with distinct random
/// integer points when the memory is short. The returned list holds
/// no duplicates.
std::vector<Vector> warmstart_select(const EpisodicMemory& memory,
                                     double meta_feature, int m,
                                     const numeric::BoundedBox& bounds,
                                     numeric::Rng& rng);

}  // namespace grownet::engine
