#include "grownet/data/synthetic.hpp"

#include <cmath>
#include <vector>

#include "grownet/numeric/rng.hpp"

namespace grownet::data {
namespace {

/// Smooth random field: uniform noise blurred a few times, then
/// stretched to [0,1].
Matrix make_prototype(int size, numeric::Rng& rng) {
  Matrix field(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      field(y, x) = rng.uniform();
    }
  }
  const double kernel[3] = {0.25, 0.5, 0.25};
  for (int pass = 0; pass < 3; ++pass) {
    Matrix blurred = Matrix::Zero(size, size);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        double total = 0.0;
        double weight = 0.0;
        for (int k = -1; k <= 1; ++k) {
          const int xx = x + k;
          if (xx < 0 || xx >= size) continue;
          total += kernel[k + 1] * field(y, xx);
          weight += kernel[k + 1];
        }
        blurred(y, x) = total / weight;
      }
    }
    Matrix blurred2 = Matrix::Zero(size, size);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        double total = 0.0;
        double weight = 0.0;
        for (int k = -1; k <= 1; ++k) {
          const int yy = y + k;
          if (yy < 0 || yy >= size) continue;
          total += kernel[k + 1] * blurred(yy, x);
          weight += kernel[k + 1];
        }
        blurred2(y, x) = total / weight;
      }
    }
    field = blurred2;
  }
  const double lo = field.minCoeff();
  const double hi = field.maxCoeff();
  field = (field.array() - lo) / std::max(hi - lo, 1e-12);
  return field;
}

LabeledSet sample_pool(const std::vector<Matrix>& prototypes,
                       const SyntheticSpec& spec, int count,
                       numeric::Rng& rng) {
  const int size = spec.image_size;
  LabeledSet set;
  set.width = size;
  set.height = size;
  set.channels = 1;
  set.class_count = spec.classes;
  set.images.resize(count, size * size);
  set.labels.resize(static_cast<std::size_t>(count));

  for (int i = 0; i < count; ++i) {
    const int label = static_cast<int>(rng.index(
        static_cast<std::size_t>(spec.classes)));
    const Matrix& proto = prototypes[static_cast<std::size_t>(label)];
    const int shift_span = 2 * spec.max_shift + 1;
    const int dx = static_cast<int>(rng.index(
                       static_cast<std::size_t>(shift_span))) -
                   spec.max_shift;
    const int dy = static_cast<int>(rng.index(
                       static_cast<std::size_t>(shift_span))) -
                   spec.max_shift;
    const double gain = rng.uniform(0.75, 1.1);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const int sy = y - dy;
        const int sx = x - dx;
        double v = 0.0;
        if (sy >= 0 && sy < size && sx >= 0 && sx < size) {
          v = gain * proto(sy, sx);
        }
        v += spec.noise * rng.normal();
        set.images(i, y * size + x) = std::min(std::max(v, 0.0), 1.0);
      }
    }
    set.labels[static_cast<std::size_t>(i)] = label;
  }
  return set;
}

}  // namespace

SyntheticData make_synthetic_digits(const SyntheticSpec& spec) {
  std::vector<Matrix> prototypes;
  prototypes.reserve(static_cast<std::size_t>(spec.classes));
  for (int c = 0; c < spec.classes; ++c) {
    numeric::Rng rng(numeric::derive_seed(spec.seed,
                                          100 + static_cast<std::uint64_t>(c)));
    prototypes.push_back(make_prototype(spec.image_size, rng));
  }
  SyntheticData data;
  numeric::Rng train_rng(numeric::derive_seed(spec.seed, 1));
  numeric::Rng test_rng(numeric::derive_seed(spec.seed, 2));
  data.train = sample_pool(prototypes, spec, spec.train_count, train_rng);
  data.test = sample_pool(prototypes, spec, spec.test_count, test_rng);
  return data;
}

}  // namespace grownet::data
