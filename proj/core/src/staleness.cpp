#include "mafl/staleness.hpp"

#include <cmath>

namespace mafl {

double upload_weight(const SimConfig& cfg, double delay_s) {
  return std::pow(cfg.upload_decay, delay_s - 1.0);
}

double train_delay(const VehicleProfile& profile, const SimConfig& cfg) {
  return static_cast<double>(profile.data_count) * cfg.cycles_per_sample /
         profile.cpu_freq;
}

double train_weight(const SimConfig& cfg, double delay_s) {
  return std::pow(cfg.train_decay, delay_s - 1.0);
}

DelayWeights make_weights(const SimConfig& cfg, double upload_delay_s,
                          double train_delay_s) {
  DelayWeights w;
  w.upload_delay = upload_delay_s;
  w.train_delay = train_delay_s;
  if (cfg.scheme == Scheme::afl) {
    // plain AFL: no staleness compensation
    w.upload_weight = 1.0;
    w.train_weight = 1.0;
  } else {
    w.upload_weight = upload_weight(cfg, upload_delay_s);
    w.train_weight = train_weight(cfg, train_delay_s);
  }
  return w;
}

ModelParams weight_local_model(const ModelParams& local,
                               const DelayWeights& weights) {
  return scale(local, weights.upload_weight * weights.train_weight);
}

}  // namespace mafl
