#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mafl {

enum class BoundaryPolicy { wrap, exit };
enum class Scheme { mafl, afl };
enum class ModelKind { softmax_regression, mlp_1hidden };

// Every experiment scalar lives here: the published parameter table plus the
// knobs the source material leaves open (slot length, coverage extent,
// boundary behavior, fading memory, seeds). Immutable after validation.
struct SimConfig {
  // fleet / scenario
  int num_vehicles = 10;        // K
  double velocity = 20.0;       // v, m/s
  double rsu_height = 10.0;     // H, m
  double lane_offset = 10.0;    // d_y, m
  double cycles_per_sample = 1e5;  // C_y
  double model_size_bits = 5000.0; // |w|, simulated payload

  // radio
  double bandwidth = 1e5;       // B, Hz
  double tx_power = 0.1;        // p_m, W
  double path_loss_exp = 2.0;   // alpha
  double noise_power = 1e-14;   // sigma^2, W (table gives 1e-11 mW)
  double fading_rho = 0.99;     // AR(1) coefficient

  // aggregation / staleness
  double agg_proportion = 0.5;  // beta, in (0,1)
  double upload_decay = 0.9;    // gamma, in (0,1)
  double train_decay = 0.9;     // zeta, in (0,1)

  // run control
  int num_rounds = 100;         // M
  int local_iters = 5;          // l
  double learning_rate = 0.05;  // eta
  double slot_seconds = 1.0;    // delta t
  double coverage_half_width = 500.0;  // R, m
  BoundaryPolicy boundary_policy = BoundaryPolicy::wrap;
  std::uint64_t rng_seed = 1;
  Scheme scheme = Scheme::mafl;

  // trainer
  ModelKind model_kind = ModelKind::softmax_regression;
  int hidden_width = 64;

  // Throws ValidationError naming the first violated field.
  void validate() const;
};

struct VehicleProfile {
  int vehicle_id = 0;     // 1-based
  long data_count = 0;    // D_i, samples
  double cpu_freq = 0.0;  // delta_i, cycles/s
  double initial_x = 0.0; // d_x(0), m
};

// One override assignment, e.g. from a CLI flag: "agg.proportion=0.7".
struct ConfigOverride {
  std::string key;
  std::string value;
};

// Parse the flat key-value text format (one `key = value` per line, '#'
// comments, dotted namespaces). Unknown keys are rejected with the line
// number. Values not overridden keep the defaults above.
SimConfig parse_config(const std::string& text);

// Parse the equivalent JSON document (nested objects join key paths with
// '.'). Accepts flat dotted keys too.
SimConfig parse_config_json(const std::string& json_text);

// Apply overrides on top of an existing config, then re-validate.
void apply_overrides(SimConfig& cfg, const std::vector<ConfigOverride>& ovs);

// Canonical text serialization; parse(serialize(cfg)) == cfg exactly.
std::string serialize_config(const SimConfig& cfg);

// Hex hash of the config excluding the scheme field, so paired mafl/afl runs
// over identical conditions share a fingerprint.
std::string config_fingerprint(const SimConfig& cfg);

// The published data/compute schedules: D_i = 2250 + 3750 i,
// delta_i = 1.5 (i+5) 1e8, with initial positions drawn per vehicle from a
// seed-derived stream, uniform in [-R, +R).
std::vector<VehicleProfile> default_profiles(const SimConfig& cfg);

const char* to_string(BoundaryPolicy p);
const char* to_string(Scheme s);
const char* to_string(ModelKind m);

}  // namespace mafl
