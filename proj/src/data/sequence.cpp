#include "grownet/data/sequence.hpp"

#include <cstring>

#include "grownet/data/transforms.hpp"
#include "grownet/numeric/rng.hpp"

namespace grownet::data {
namespace {

std::uint64_t fnv1a64(const unsigned char* bytes, std::size_t count,
                      std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (std::size_t i = 0; i < count; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::vector<Eigen::Index> draw_indices(numeric::Rng& rng, Eigen::Index pool,
                                       int count) {
  if (count > pool) {
    throw std::invalid_argument("build_sequence: pool smaller than requested "
                                "sample count");
  }
  std::vector<Eigen::Index> all(static_cast<std::size_t>(pool));
  for (Eigen::Index i = 0; i < pool; ++i) {
    all[static_cast<std::size_t>(i)] = i;
  }
  rng.shuffle(all);
  all.resize(static_cast<std::size_t>(count));
  return all;
}

}  // namespace

std::uint64_t provenance_digest(SequenceKind kind, int task_index,
                                std::uint64_t seed, double angle) {
  unsigned char bytes[1 + 4 + 8 + 8];
  bytes[0] = kind == SequenceKind::permutations ? 1 : 2;
  std::memcpy(bytes + 1, &task_index, 4);
  std::memcpy(bytes + 5, &seed, 8);
  std::memcpy(bytes + 13, &angle, 8);
  return fnv1a64(bytes, sizeof bytes);
}

TaskSequence build_sequence(const LabeledSet& train_pool,
                            const LabeledSet& test_pool, SequenceKind kind,
                            int task_count, const SplitSizes& sizes,
                            std::uint64_t master_seed) {
  if (task_count < 1) {
    throw std::invalid_argument("build_sequence: task count must be >= 1");
  }
  TaskSequence sequence;
  sequence.kind = kind;
  sequence.master_seed = master_seed;

  const int rotation_tasks = kind == SequenceKind::mix ? task_count / 2 : 0;

  for (int t = 1; t <= task_count; ++t) {
    TaskProvenance prov;
    prov.task_index = t;
    const bool rotate = kind == SequenceKind::mix && t % 2 == 0;
    if (rotate) {
      const int ordinal = t / 2;  // 1..rotation_tasks
      prov.transform = "rotate";
      prov.angle = 180.0 * static_cast<double>(ordinal) /
                   static_cast<double>(rotation_tasks);
    } else {
      prov.transform = "permute";
      prov.seed = numeric::derive_seed(master_seed,
                                       1000 + static_cast<std::uint64_t>(t));
    }
    prov.digest = provenance_digest(kind, t, prov.seed, prov.angle);

    numeric::Rng sampler(numeric::derive_seed(
        master_seed, 2000 + static_cast<std::uint64_t>(t)));
    std::vector<Eigen::Index> pool_indices =
        draw_indices(sampler, train_pool.size(), sizes.train + sizes.val);
    const std::vector<Eigen::Index> train_idx(
        pool_indices.begin(), pool_indices.begin() + sizes.train);
    const std::vector<Eigen::Index> val_idx(
        pool_indices.begin() + sizes.train, pool_indices.end());
    const std::vector<Eigen::Index> test_idx =
        draw_indices(sampler, test_pool.size(), sizes.test);

    TaskData task;
    task.provenance = prov;
    task.train = train_pool.subset(train_idx);
    task.val = train_pool.subset(val_idx);
    task.test = test_pool.subset(test_idx);
    if (prov.transform == "permute") {
      const auto perm = permutation_from_seed(
          static_cast<int>(train_pool.images.cols()), prov.seed);
      task.train = apply_permutation(task.train, perm);
      task.val = apply_permutation(task.val, perm);
      task.test = apply_permutation(task.test, perm);
    } else {
      task.train = rotate_images(task.train, prov.angle);
      task.val = rotate_images(task.val, prov.angle);
      task.test = rotate_images(task.test, prov.angle);
    }
    sequence.tasks.push_back(std::move(task));
  }
  return sequence;
}

}  // namespace grownet::data
