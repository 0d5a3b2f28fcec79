#pragma once

#include <optional>
#include <vector>

#include "mafl/config.hpp"
#include "mafl/dataset.hpp"
#include "mafl/model.hpp"
#include "mafl/staleness.hpp"

namespace mafl {

// One global aggregation event, as recorded for the output files.
struct RoundRecord {
  int round = 0;           // 1-based, strictly increasing
  double sim_time = 0.0;   // seconds, non-decreasing
  int vehicle_id = 0;
  double upload_weight = 1.0;
  double train_weight = 1.0;
  double test_accuracy = 0.0;  // percent
  double test_loss = 0.0;      // per-sample

  bool operator==(const RoundRecord&) const = default;
};

// Test hooks: pin the per-cycle delays to fixed values instead of the
// mobility/compute formulas. Weights are still derived from the effective
// delays, so forcing both to 1 s makes every weight exactly 1.
struct SimOverrides {
  std::optional<double> train_delay;
  std::optional<double> upload_delay;
};

struct DataBundle {
  std::vector<DatasetView> shards;  // one per vehicle, profile order
  const Dataset* test = nullptr;
};

struct SimResult {
  std::vector<RoundRecord> records;
  bool starved = false;  // exit policy dropped every vehicle before round M
  ModelParams final_global;
};

// beta*global + (1-beta)*weighted_local, elementwise.
ModelParams aggregate(const ModelParams& global,
                      const ModelParams& weighted_local, double beta);

// The asynchronous event loop: every vehicle starts by downloading the
// fresh global (download delay is zero), trains for its compute delay,
// uploads at the channel rate sampled at the slot its upload begins, and on
// each completed upload the RSU weights (scheme mafl) and aggregates the
// model, emits a RoundRecord with test metrics, and hands the uploader the
// new global. Simultaneous completions aggregate in ascending vehicle id.
// Output is a pure function of (cfg, profiles, data).
SimResult run_simulation(const SimConfig& cfg,
                         const std::vector<VehicleProfile>& profiles,
                         const DataBundle& data,
                         const SimOverrides& overrides = {});

}  // namespace mafl
