#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mafl {

enum class Split { train, test };

// Labeled feature vectors, row-major. Features live in [0,1] (pixels are
// divided by 255 on ingestion). Stored as float: the raw data is 8-bit, the
// training math upcasts to double.
struct Dataset {
  int feature_dim = 0;
  int num_classes = 10;
  std::vector<float> features;        // size() * feature_dim
  std::vector<std::uint8_t> labels;   // class indices
  Split split_tag = Split::train;

  std::size_t size() const { return labels.size(); }
  const float* row(std::size_t i) const {
    return features.data() + i * static_cast<std::size_t>(feature_dim);
  }
};

// A shard: subset of a dataset by index, no copy.
struct DatasetView {
  const Dataset* base = nullptr;
  std::vector<std::uint32_t> indices;

  std::size_t size() const { return indices.size(); }
  const float* row(std::size_t i) const { return base->row(indices[i]); }
  std::uint8_t label(std::size_t i) const { return base->labels[indices[i]]; }
};

DatasetView view_all(const Dataset& d);

// Standard IDX ingestion: expects the four canonical files
// (train-images-idx3-ubyte, train-labels-idx1-ubyte, t10k-*) under `dir`.
// Throws DataError naming the offending file on missing/short/garbled input.
std::pair<Dataset, Dataset> load_mnist(const std::string& dir);

// Single-pair IDX ingestion (used by load_mnist and directly by tests).
Dataset load_idx_pair(const std::string& images_path,
                      const std::string& labels_path, Split split);

// IDX emission, the exact inverse format of load_idx_pair. Features are
// quantized to bytes by round(f*255); rows/cols are the square factorization
// of feature_dim (28x28 for 784).
void write_idx_pair(const Dataset& d, const std::string& images_path,
                    const std::string& labels_path);

// Deterministic Gaussian-blob classification data: per-class mean vectors
// with iid noise, clipped to [0,1]. noise_sigma controls difficulty.
Dataset synth_dataset(std::uint64_t seed, std::size_t n_samples,
                      int n_classes, int feature_dim = 784,
                      double noise_sigma = 0.28);

// Train/holdout pair drawn from the same class means (one generation,
// split), so the test split measures generalization on the same blobs.
std::pair<Dataset, Dataset> synth_pair(std::uint64_t seed,
                                       std::size_t n_train,
                                       std::size_t n_test, int n_classes,
                                       int feature_dim = 784,
                                       double noise_sigma = 0.28);

struct VehicleProfile;
struct SimConfig;

struct PartitionResult {
  std::vector<DatasetView> shards;  // one per profile, in profile order
  bool overlapped = false;          // sum of D_i exceeded the train set
  std::string warning;              // non-empty iff overlapped
};

// Vehicle i receives exactly D_i samples, distinct within the shard. When
// the shard sizes fit the train set the shards are also pairwise disjoint;
// otherwise each shard is drawn independently (overlap across vehicles) and
// a warning is recorded.
PartitionResult partition(const Dataset& train,
                          const std::vector<VehicleProfile>& profiles,
                          std::uint64_t seed);

}  // namespace mafl
