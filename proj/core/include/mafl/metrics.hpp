#pragma once

#include "mafl/dataset.hpp"
#include "mafl/trainer.hpp"

namespace mafl {

struct EvalResult {
  double accuracy_pct = 0.0;   // 100 * correct / total
  double per_sample_loss = 0.0;
};

// Classification accuracy (argmax, ties broken toward the lowest class
// index) and per-sample cross-entropy.
EvalResult evaluate(const TrainerModel& model, const DatasetView& test);

// Convenience overload wrapping a raw parameter vector in the configured
// architecture.
EvalResult evaluate(const ModelParams& global, const SimConfig& cfg,
                    const Dataset& test);

}  // namespace mafl
