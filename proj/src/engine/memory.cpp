#include "grownet/engine/memory.hpp"

#include <algorithm>
#include <cmath>

namespace grownet::engine {
namespace {

bool same_point(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

bool contains(const std::vector<Vector>& points, const Vector& p) {
  for (const Vector& q : points) {
    if (same_point(p, q)) return true;
  }
  return false;
}

}  // namespace

Vector random_integer_point(const numeric::BoundedBox& bounds,
                            numeric::Rng& rng) {
  Vector point(bounds.dim());
  for (Eigen::Index i = 0; i < bounds.dim(); ++i) {
    const auto lo = static_cast<long>(std::ceil(bounds.lower()[i] - 1e-9));
    const auto hi = static_cast<long>(std::floor(bounds.upper()[i] + 1e-9));
    const auto span = static_cast<std::size_t>(std::max(hi - lo, 0L)) + 1;
    point[i] = static_cast<double>(lo + static_cast<long>(rng.index(span)));
  }
  return point;
}

std::vector<Vector> warmstart_select(const EpisodicMemory& memory,
                                     double meta_feature, int m,
                                     const numeric::BoundedBox& bounds,
                                     numeric::Rng& rng) {
  std::vector<const MemoryEntry*> ranked;
  ranked.reserve(memory.size());
  for (const MemoryEntry& entry : memory.entries()) {
    ranked.push_back(&entry);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [meta_feature](const MemoryEntry* a, const MemoryEntry* b) {
                     const double da = std::abs(a->meta_feature - meta_feature);
                     const double db = std::abs(b->meta_feature - meta_feature);
                     if (da != db) return da < db;
                     return a->task > b->task;
                   });

  std::vector<Vector> selected;
  for (const MemoryEntry* entry : ranked) {
    if (static_cast<int>(selected.size()) >= m) break;
    if (contains(selected, entry->best_point)) continue;
    selected.push_back(entry->best_point);
  }
  int attempts = 0;
  while (static_cast<int>(selected.size()) < m && attempts < 10000) {
    Vector candidate = random_integer_point(bounds, rng);
    ++attempts;
    if (contains(selected, candidate)) continue;
    selected.push_back(std::move(candidate));
  }
  // Degenerate box with fewer distinct points than m: allow repeats
  // rather than spin forever.
  while (static_cast<int>(selected.size()) < m) {
    selected.push_back(random_integer_point(bounds, rng));
  }
  return selected;
}

}  // namespace grownet::engine
