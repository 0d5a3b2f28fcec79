#include "mafl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "mafl/config.hpp"
#include "mafl/errors.hpp"
#include "mafl/rng.hpp"

namespace mafl {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_be32(std::ifstream& f, const std::string& path) {
  unsigned char b[4];
  f.read(reinterpret_cast<char*>(b), 4);
  if (!f) throw DataError(path + ": truncated header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_be32(std::ofstream& f, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v)};
  f.write(reinterpret_cast<char*>(b), 4);
}

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "0x%08x", v);
  return buf;
}

}  // namespace

DatasetView view_all(const Dataset& d) {
  DatasetView v;
  v.base = &d;
  v.indices.resize(d.size());
  std::iota(v.indices.begin(), v.indices.end(), 0u);
  return v;
}

Dataset load_idx_pair(const std::string& images_path,
                      const std::string& labels_path, Split split) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw DataError(images_path + ": cannot open");
  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw DataError(labels_path + ": cannot open");

  std::uint32_t magic = read_be32(img, images_path);
  if (magic != kImagesMagic)
    throw DataError(images_path + ": bad magic " + hex32(magic) +
                    ", expected " + hex32(kImagesMagic));
  std::uint32_t n = read_be32(img, images_path);
  std::uint32_t rows = read_be32(img, images_path);
  std::uint32_t cols = read_be32(img, images_path);

  magic = read_be32(lab, labels_path);
  if (magic != kLabelsMagic)
    throw DataError(labels_path + ": bad magic " + hex32(magic) +
                    ", expected " + hex32(kLabelsMagic));
  std::uint32_t n_labels = read_be32(lab, labels_path);
  if (n != n_labels)
    throw DataError(labels_path + ": label count " + std::to_string(n_labels) +
                    " does not match image count " + std::to_string(n));

  Dataset d;
  d.split_tag = split;
  d.feature_dim = static_cast<int>(rows * cols);
  d.num_classes = 10;
  std::size_t pixels = std::size_t(n) * rows * cols;
  std::vector<unsigned char> raw(pixels);
  img.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(pixels));
  if (static_cast<std::size_t>(img.gcount()) != pixels)
    throw DataError(images_path + ": truncated payload (" +
                    std::to_string(img.gcount()) + " of " +
                    std::to_string(pixels) + " bytes)");

  d.features.resize(pixels);
  for (std::size_t i = 0; i < pixels; ++i)
    d.features[i] = static_cast<float>(raw[i]) / 255.0f;

  d.labels.resize(n);
  lab.read(reinterpret_cast<char*>(d.labels.data()), n);
  if (static_cast<std::size_t>(lab.gcount()) != n)
    throw DataError(labels_path + ": truncated payload");
  for (auto l : d.labels)
    if (l > 9) throw DataError(labels_path + ": label out of range 0..9");
  return d;
}

std::pair<Dataset, Dataset> load_mnist(const std::string& dir) {
  Dataset train = load_idx_pair(dir + "/train-images-idx3-ubyte",
                                dir + "/train-labels-idx1-ubyte", Split::train);
  Dataset test = load_idx_pair(dir + "/t10k-images-idx3-ubyte",
                               dir + "/t10k-labels-idx1-ubyte", Split::test);
  return {std::move(train), std::move(test)};
}

void write_idx_pair(const Dataset& d, const std::string& images_path,
                    const std::string& labels_path) {
  std::uint32_t rows = 1, cols = static_cast<std::uint32_t>(d.feature_dim);
  std::uint32_t r = static_cast<std::uint32_t>(std::lround(std::sqrt(double(d.feature_dim))));
  if (r * r == static_cast<std::uint32_t>(d.feature_dim)) { rows = r; cols = r; }

  std::ofstream img(images_path, std::ios::binary);
  if (!img) throw DataError(images_path + ": cannot open for writing");
  write_be32(img, kImagesMagic);
  write_be32(img, static_cast<std::uint32_t>(d.size()));
  write_be32(img, rows);
  write_be32(img, cols);
  std::vector<unsigned char> raw(d.features.size());
  for (std::size_t i = 0; i < d.features.size(); ++i)
    raw[i] = static_cast<unsigned char>(std::lround(d.features[i] * 255.0f));
  img.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!img) throw DataError(images_path + ": write failed");

  std::ofstream lab(labels_path, std::ios::binary);
  if (!lab) throw DataError(labels_path + ": cannot open for writing");
  write_be32(lab, kLabelsMagic);
  write_be32(lab, static_cast<std::uint32_t>(d.size()));
  lab.write(reinterpret_cast<const char*>(d.labels.data()),
            static_cast<std::streamsize>(d.labels.size()));
  if (!lab) throw DataError(labels_path + ": write failed");
}

Dataset synth_dataset(std::uint64_t seed, std::size_t n_samples, int n_classes,
                      int feature_dim, double noise_sigma) {
  if (n_classes < 2 || n_samples < static_cast<std::size_t>(n_classes))
    throw DataError("synth_dataset: need n_samples >= n_classes >= 2");

  Rng mean_rng(derive_seed(seed, "synth-means"));
  std::vector<double> means(std::size_t(n_classes) * feature_dim);
  for (auto& m : means) m = mean_rng.uniform(0.25, 0.75);

  Dataset d;
  d.feature_dim = feature_dim;
  d.num_classes = n_classes;
  d.features.resize(n_samples * static_cast<std::size_t>(feature_dim));
  d.labels.resize(n_samples);

  // round-robin labels, then shuffle the sample order
  std::vector<std::uint32_t> order(n_samples);
  std::iota(order.begin(), order.end(), 0u);
  Rng shuffle_rng(derive_seed(seed, "synth-order"));
  for (std::size_t i = n_samples - 1; i > 0; --i) {
    std::size_t j = shuffle_rng.uniform_index(i + 1);
    std::swap(order[i], order[j]);
  }

  Rng noise_rng(derive_seed(seed, "synth-noise"));
  for (std::size_t s = 0; s < n_samples; ++s) {
    int cls = static_cast<int>(order[s] % static_cast<std::uint32_t>(n_classes));
    d.labels[s] = static_cast<std::uint8_t>(cls);
    const double* mean = means.data() + std::size_t(cls) * feature_dim;
    float* row = d.features.data() + s * static_cast<std::size_t>(feature_dim);
    for (int f = 0; f < feature_dim; ++f) {
      double v = mean[f] + noise_sigma * noise_rng.normal();
      row[f] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return d;
}

std::pair<Dataset, Dataset> synth_pair(std::uint64_t seed,
                                       std::size_t n_train,
                                       std::size_t n_test, int n_classes,
                                       int feature_dim, double noise_sigma) {
  Dataset all = synth_dataset(seed, n_train + n_test, n_classes, feature_dim,
                              noise_sigma);
  Dataset train, test;
  train.feature_dim = test.feature_dim = feature_dim;
  train.num_classes = test.num_classes = n_classes;
  train.split_tag = Split::train;
  test.split_tag = Split::test;
  std::size_t fd = static_cast<std::size_t>(feature_dim);
  train.features.assign(all.features.begin(),
                        all.features.begin() + n_train * fd);
  train.labels.assign(all.labels.begin(), all.labels.begin() + n_train);
  test.features.assign(all.features.begin() + n_train * fd,
                       all.features.end());
  test.labels.assign(all.labels.begin() + n_train, all.labels.end());
  return {std::move(train), std::move(test)};
}

PartitionResult partition(const Dataset& train,
                          const std::vector<VehicleProfile>& profiles,
                          std::uint64_t seed) {
  PartitionResult res;
  long total = 0;
  long max_shard = 0;
  for (const auto& p : profiles) {
    total += p.data_count;
    max_shard = std::max(max_shard, p.data_count);
  }
  if (max_shard > static_cast<long>(train.size()))
    throw DataError("partition: shard of " + std::to_string(max_shard) +
                    " samples exceeds train set of " +
                    std::to_string(train.size()));

  if (total <= static_cast<long>(train.size())) {
    // disjoint shards: one global draw without replacement, split in order
    std::vector<std::uint32_t> pool(train.size());
    std::iota(pool.begin(), pool.end(), 0u);
    Rng rng(derive_seed(seed, "partition"));
    for (std::size_t i = pool.size() - 1; i > 0; --i) {
      std::size_t j = rng.uniform_index(i + 1);
      std::swap(pool[i], pool[j]);
    }
    std::size_t cursor = 0;
    for (const auto& p : profiles) {
      DatasetView v;
      v.base = &train;
      v.indices.assign(pool.begin() + cursor,
                       pool.begin() + cursor + p.data_count);
      cursor += p.data_count;
      res.shards.push_back(std::move(v));
    }
  } else {
    // shard sizes exceed the train set: draw each vehicle's shard
    // independently (without replacement within the shard), allow overlap
    res.overlapped = true;
    res.warning = "total shard size " + std::to_string(total) +
                  " exceeds train set size " + std::to_string(train.size()) +
                  "; shards drawn with cross-vehicle overlap";
    for (const auto& p : profiles) {
      Rng rng(derive_seed(seed, "partition",
                          static_cast<std::uint64_t>(p.vehicle_id)));
      // partial Fisher-Yates: first D_i entries of a shuffled index pool
      std::vector<std::uint32_t> pool(train.size());
      std::iota(pool.begin(), pool.end(), 0u);
      for (long i = 0; i < p.data_count; ++i) {
        std::size_t j = i + rng.uniform_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
      }
      DatasetView v;
      v.base = &train;
      v.indices.assign(pool.begin(), pool.begin() + p.data_count);
      res.shards.push_back(std::move(v));
    }
  }
  return res;
}

}  // namespace mafl
