#pragma once

#include <cstdint>
#include <vector>

#include "mafl/config.hpp"
#include "mafl/dataset.hpp"
#include "mafl/model.hpp"

namespace mafl {

// A classifier over flat feature vectors. Two kinds: plain softmax
// regression (F -> C) and a one-hidden-layer tanh MLP (F -> H -> C).
// Parameters live in one flat vector, layout documented in trainer.cpp.
struct TrainerModel {
  ModelKind kind = ModelKind::softmax_regression;
  int feature_dim = 784;
  int n_classes = 10;
  int hidden_width = 64;  // MLP only
  ModelParams params;

  std::size_t param_count() const;
  std::string expected_shape_tag() const;
};

// Model with seeded uniform [-0.05, 0.05] parameters.
TrainerModel init_model(ModelKind kind, int feature_dim, int n_classes,
                        int hidden_width, std::uint64_t seed);

// Same architecture, parameters taken from an existing vector (shape tag
// checked).
TrainerModel model_from_params(ModelKind kind, int feature_dim, int n_classes,
                               int hidden_width, const ModelParams& params);

// Per-sample class probabilities, row-major size() x n_classes. Each row is
// nonnegative and sums to 1.
std::vector<double> predict_probs(const TrainerModel& model,
                                  const DatasetView& data);

struct LossValue {
  double total = 0.0;       // summed cross-entropy over the shard
  double per_sample = 0.0;  // total / |shard|
};

// Cross-entropy against one-hot labels, log floored at 1e-12.
LossValue loss(const TrainerModel& model, const DatasetView& shard);

// One full-batch gradient-descent step on the mean cross-entropy,
// params' = params - eta * grad. Analytic gradients for both kinds.
TrainerModel sgd_step(const TrainerModel& model, const DatasetView& batch,
                      double eta);

// Gradient of the mean cross-entropy at the model's current parameters,
// flat layout matching params (exposed for the finite-difference checks).
std::vector<double> gradient(const TrainerModel& model,
                             const DatasetView& batch);

// Initialize the local model from the downloaded global and run exactly
// cfg.local_iters full-batch steps over the shard.
ModelParams local_train(const ModelParams& global, const DatasetView& shard,
                        const SimConfig& cfg);

}  // namespace mafl
