#include "mafl/sim.hpp"

#include <cmath>
#include <queue>

#include "mafl/channel.hpp"
#include "mafl/errors.hpp"
#include "mafl/metrics.hpp"
#include "mafl/trainer.hpp"

namespace mafl {

ModelParams aggregate(const ModelParams& global,
                      const ModelParams& weighted_local, double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw NumericError("aggregate: beta must lie in (0,1)");
  return axpby(beta, global, 1.0 - beta, weighted_local);
}

namespace {

struct UploadEvent {
  double fire_time = 0.0;
  int vehicle_id = 0;  // 1-based
  DelayWeights weights;
};

struct EventLater {
  bool operator()(const UploadEvent& a, const UploadEvent& b) const {
    if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
    return a.vehicle_id > b.vehicle_id;  // ties: lowest id first
  }
};

struct VehicleRuntime {
  const VehicleProfile* profile = nullptr;
  FadingState fading;
  ModelParams downloaded;  // global snapshot at cycle start
  bool active = true;
};

}  // namespace

SimResult run_simulation(const SimConfig& cfg,
                         const std::vector<VehicleProfile>& profiles,
                         const DataBundle& data,
                         const SimOverrides& overrides) {
  cfg.validate();
  if (profiles.empty()) throw NumericError("run_simulation: no profiles");
  if (data.shards.size() != profiles.size())
    throw NumericError("run_simulation: shard count != profile count");
  if (!data.test) throw NumericError("run_simulation: missing test set");

  const Dataset& test = *data.test;
  ModelParams global = init_model(cfg.model_kind, test.feature_dim,
                                  test.num_classes, cfg.hidden_width,
                                  cfg.rng_seed)
                           .params;

  std::vector<VehicleRuntime> vehicles;
  vehicles.reserve(profiles.size());
  for (const auto& p : profiles)
    vehicles.push_back({&p, FadingState(cfg.rng_seed, p.vehicle_id,
                                        cfg.fading_rho),
                        global, true});

  std::priority_queue<UploadEvent, std::vector<UploadEvent>, EventLater> queue;

  // Schedules the next upload-completion of a vehicle whose cycle starts at
  // `start`. Returns false when the exit policy drops the vehicle instead.
  auto schedule = [&](std::size_t idx, double start) -> bool {
    VehicleRuntime& v = vehicles[idx];
    const VehicleProfile& p = *v.profile;

    double t_train = overrides.train_delay
                         ? *overrides.train_delay
                         : train_delay(p, cfg);
    double upload_start = start + t_train;

    // Channel sampled at the slot boundary of the slot the upload begins in;
    // the fading stream advances one AR step per elapsed slot.
    long slot = static_cast<long>(std::floor(upload_start / cfg.slot_seconds));
    double t_up;
    if (overrides.upload_delay) {
      v.fading.advance_to_slot(slot);
      t_up = *overrides.upload_delay;
    } else {
      for (int attempts = 0;; ++attempts) {
        v.fading.advance_to_slot(slot);
        double t_slot = static_cast<double>(slot) * cfg.slot_seconds;
        Position3D pos = position_at(p, cfg, t_slot);
        double d = distance_to_rsu(pos, cfg);
        double rate = tx_rate(cfg, v.fading.gain(), d);
        if (rate > 0.0) {
          t_up = upload_delay(cfg, rate);
          break;
        }
        // dead slot (gain exactly zero); retry on the next one
        if (attempts > 1000000)
          throw LinkUnusableError("run_simulation: link dead for 1e6 slots");
        ++slot;
        upload_start = static_cast<double>(slot) * cfg.slot_seconds;
      }
    }

    double fire = upload_start + t_up;
    if (cfg.boundary_policy == BoundaryPolicy::exit) {
      double t_exit = (cfg.coverage_half_width - p.initial_x) / cfg.velocity;
      if (fire > t_exit) {
        v.active = false;
        return false;
      }
    }

    UploadEvent ev;
    ev.fire_time = fire;
    ev.vehicle_id = p.vehicle_id;
    ev.weights = make_weights(cfg, t_up, t_train);
    queue.push(ev);
    return true;
  };

  for (std::size_t i = 0; i < vehicles.size(); ++i) schedule(i, 0.0);

  SimResult result;
  result.records.reserve(cfg.num_rounds);
  int round = 0;
  while (round < cfg.num_rounds && !queue.empty()) {
    UploadEvent ev = queue.top();
    queue.pop();
    std::size_t idx = 0;
    while (vehicles[idx].profile->vehicle_id != ev.vehicle_id) ++idx;
    VehicleRuntime& v = vehicles[idx];

    // The local model is a pure function of the downloaded snapshot and the
    // shard, so it can be computed at delivery time.
    ModelParams local = local_train(v.downloaded, data.shards[idx], cfg);
    ModelParams weighted = weight_local_model(local, ev.weights);
    global = aggregate(global, weighted, cfg.agg_proportion);
    ++round;

    EvalResult eval = evaluate(global, cfg, test);
    RoundRecord rec;
    rec.round = round;
    rec.sim_time = ev.fire_time;
    rec.vehicle_id = ev.vehicle_id;
    rec.upload_weight = ev.weights.upload_weight;
    rec.train_weight = ev.weights.train_weight;
    rec.test_accuracy = eval.accuracy_pct;
    rec.test_loss = eval.per_sample_loss;
    result.records.push_back(rec);

    // uploader downloads the fresh global and starts its next cycle
    v.downloaded = global;
    schedule(idx, ev.fire_time);
  }

  result.starved = round < cfg.num_rounds;
  result.final_global = std::move(global);
  return result;
}

}  // namespace mafl
