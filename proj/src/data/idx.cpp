#include "grownet/data/idx.hpp"

#include <cstdint>
#include <fstream>
#include <vector>

namespace grownet::data {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("idx: cannot open " + path);
  }
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes,
                        std::size_t offset, const std::string& path) {
  if (offset + 4 > bytes.size()) {
    throw TruncatedFile("idx: truncated header in " + path);
  }
  return (static_cast<std::uint32_t>(bytes[offset]) << 24) |
         (static_cast<std::uint32_t>(bytes[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(bytes[offset + 2]) << 8) |
         static_cast<std::uint32_t>(bytes[offset + 3]);
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {static_cast<unsigned char>(v >> 24),
                                  static_cast<unsigned char>(v >> 16),
                                  static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

}  // namespace

LabeledSet load_idx(const std::string& images_path,
                    const std::string& labels_path) {
  const auto image_bytes = read_file(images_path);
  if (read_be32(image_bytes, 0, images_path) != kImageMagic) {
    throw BadMagic("idx: bad image magic in " + images_path);
  }
  const std::uint32_t count = read_be32(image_bytes, 4, images_path);
  const std::uint32_t rows = read_be32(image_bytes, 8, images_path);
  const std::uint32_t cols = read_be32(image_bytes, 12, images_path);
  const std::size_t pixels =
      static_cast<std::size_t>(count) * rows * cols;
  if (image_bytes.size() < 16 + pixels) {
    throw TruncatedFile("idx: image payload short in " + images_path);
  }

  const auto label_bytes = read_file(labels_path);
  if (read_be32(label_bytes, 0, labels_path) != kLabelMagic) {
    throw BadMagic("idx: bad label magic in " + labels_path);
  }
  const std::uint32_t label_count = read_be32(label_bytes, 4, labels_path);
  if (label_bytes.size() < 8 + label_count) {
    throw TruncatedFile("idx: label payload short in " + labels_path);
  }
  if (label_count != count) {
    throw CountMismatch("idx: image and label counts differ");
  }

  LabeledSet set;
  set.width = static_cast<int>(cols);
  set.height = static_cast<int>(rows);
  set.channels = 1;
  set.images.resize(static_cast<Eigen::Index>(count),
                    static_cast<Eigen::Index>(rows * cols));
  set.labels.resize(count);
  int max_label = 0;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t base = 16 + static_cast<std::size_t>(i) * rows * cols;
    for (std::uint32_t p = 0; p < rows * cols; ++p) {
      set.images(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) =
          static_cast<double>(image_bytes[base + p]) / 255.0;
    }
    set.labels[i] = static_cast<int>(label_bytes[8 + i]);
    max_label = std::max(max_label, set.labels[i]);
  }
  set.class_count = std::max(10, max_label + 1);
  return set;
}

void save_idx(const LabeledSet& set, const std::string& images_path,
              const std::string& labels_path) {
  std::ofstream images(images_path, std::ios::binary);
  if (!images) throw std::runtime_error("idx: cannot open " + images_path);
  write_be32(images, kImageMagic);
  write_be32(images, static_cast<std::uint32_t>(set.size()));
  write_be32(images, static_cast<std::uint32_t>(set.height));
  write_be32(images, static_cast<std::uint32_t>(set.width));
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    for (Eigen::Index p = 0; p < set.images.cols(); ++p) {
      const double v = std::min(std::max(set.images(i, p), 0.0), 1.0);
      const auto byte = static_cast<unsigned char>(v * 255.0 + 0.5);
      images.write(reinterpret_cast<const char*>(&byte), 1);
    }
  }

  std::ofstream labels(labels_path, std::ios::binary);
  if (!labels) throw std::runtime_error("idx: cannot open " + labels_path);
  write_be32(labels, kLabelMagic);
  write_be32(labels, static_cast<std::uint32_t>(set.labels.size()));
  for (const int label : set.labels) {
    const auto byte = static_cast<unsigned char>(label);
    labels.write(reinterpret_cast<const char*>(&byte), 1);
  }
}

}  // namespace grownet::data
