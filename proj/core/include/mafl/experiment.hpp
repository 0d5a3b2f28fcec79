#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mafl/config.hpp"
#include "mafl/dataset.hpp"
#include "mafl/metrics.hpp"
#include "mafl/sim.hpp"

namespace mafl {

// One experiment: the same configuration run once per seed, with data
// partition, initial positions, fading streams and global-model init all
// reseeded per run. Per-round accuracy/loss are averaged across seeds;
// timing and participant columns come from the first (lowest-index) seed.
struct ExperimentResult {
  Scheme scheme = Scheme::mafl;
  std::vector<std::uint64_t> seeds;
  std::vector<RoundRecord> rounds;  // length = num_rounds
  std::string fingerprint;          // scheme-independent config hash
  std::string warning;              // e.g. overlapping partition

  bool operator==(const ExperimentResult&) const = default;
};

enum class OutputFormat { csv, json };

// Runs cfg once per seed against the given train/test data. Seed runs are
// independent and may execute on up to `threads` workers; results join in
// seed order, so the output does not depend on the worker count.
ExperimentResult run_experiment(const SimConfig& cfg,
                                const std::vector<std::uint64_t>& seeds,
                                const Dataset& train, const Dataset& test,
                                int threads = 1);

struct BetaPoint {
  double beta = 0.0;
  double final_accuracy_pct = 0.0;
};

struct BetaSweep {
  std::vector<BetaPoint> points;
  std::string warning;  // set when duplicate betas were dropped
};

// run_experiment per beta value (duplicates deduplicated with a warning),
// reporting the final-round mean accuracy for each.
BetaSweep sweep_beta(const SimConfig& cfg, const std::vector<double>& betas,
                     const std::vector<std::uint64_t>& seeds,
                     const Dataset& train, const Dataset& test,
                     int threads = 1);

// CSV: header `round,sim_time_s,vehicle_id,upload_weight,train_weight,
// accuracy_pct,loss` plus one row per round. JSON mirrors the same fields
// and adds scheme, seeds and the config fingerprint. Byte-stable for fixed
// inputs.
void write_results(const ExperimentResult& result, const std::string& path,
                   OutputFormat format);

// Inverse of the JSON form of write_results.
ExperimentResult parse_results_json(const std::string& text);

void write_sweep(const BetaSweep& sweep, const std::string& path,
                 OutputFormat format);

}  // namespace mafl
