#pragma once

#include "mafl/config.hpp"
#include "mafl/model.hpp"

namespace mafl {

// Delay-decay weights applied to an uploaded local model. Note the exponent
// is (delay - 1): a one-second delay is weight 1, faster uploads weigh more
// than 1. Implemented exactly as stated, no clamping.
struct DelayWeights {
  double upload_weight = 1.0;  // gamma^(upload_delay - 1)
  double train_weight = 1.0;   // zeta^(train_delay - 1)
  double upload_delay = 0.0;   // seconds
  double train_delay = 0.0;    // seconds
};

double upload_weight(const SimConfig& cfg, double delay_s);

// D_i * C_y / delta_i, seconds.
double train_delay(const VehicleProfile& profile, const SimConfig& cfg);

double train_weight(const SimConfig& cfg, double delay_s);

DelayWeights make_weights(const SimConfig& cfg, double upload_delay_s,
                          double train_delay_s);

// Elementwise product with upload_weight * train_weight.
ModelParams weight_local_model(const ModelParams& local,
                               const DelayWeights& weights);

}  // namespace mafl
