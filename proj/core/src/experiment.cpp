#include "mafl/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "mafl/errors.hpp"

namespace mafl {

namespace {

std::string fmt_double(double d) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  return buf;
}

SimResult run_one_seed(const SimConfig& base, std::uint64_t seed,
                       const Dataset& train, const Dataset& test) {
  SimConfig cfg = base;
  cfg.rng_seed = seed;
  std::vector<VehicleProfile> profiles = default_profiles(cfg);
  PartitionResult part = partition(train, profiles, seed);
  DataBundle data;
  data.shards = std::move(part.shards);
  data.test = &test;
  SimResult r = run_simulation(cfg, profiles, data);
  if (r.starved)
    throw std::runtime_error(
        "seed " + std::to_string(seed) + ": simulation starved after " +
        std::to_string(r.records.size()) + " of " +
        std::to_string(cfg.num_rounds) + " rounds (exit policy)");
  return r;
}

}  // namespace

ExperimentResult run_experiment(const SimConfig& cfg,
                                const std::vector<std::uint64_t>& seeds,
                                const Dataset& train, const Dataset& test,
                                int threads) {
  if (seeds.empty()) throw std::runtime_error("run_experiment: no seeds");
  cfg.validate();
  // seed order never matters: runs are independent and the mean is
  // order-free, so normalize up front
  std::vector<std::uint64_t> sorted(seeds);
  std::sort(sorted.begin(), sorted.end());

  std::vector<SimResult> runs(sorted.size());
  std::vector<std::string> failures(sorted.size());

  if (threads < 1) threads = 1;
  std::size_t next = 0;
  std::vector<std::thread> pool;
  auto worker = [&](std::size_t i) {
    try {
      runs[i] = run_one_seed(cfg, sorted[i], train, test);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  };
  if (threads == 1) {
    for (std::size_t i = 0; i < sorted.size(); ++i) worker(i);
  } else {
    std::mutex mu;
    auto drain = [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lk(mu);
          if (next >= sorted.size()) return;
          i = next++;
        }
        worker(i);
      }
    };
    for (int t = 0; t < threads; ++t) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (!failures[i].empty())
      throw std::runtime_error("run_experiment: " + failures[i]);

  ExperimentResult res;
  res.scheme = cfg.scheme;
  res.seeds = sorted;
  res.fingerprint = config_fingerprint(cfg);

  PartitionResult probe =
      partition(train, default_profiles(cfg), sorted.front());
  res.warning = probe.warning;

  // timing/participant columns from the first seed, metrics averaged
  res.rounds = runs.front().records;
  for (auto& rec : res.rounds) {
    rec.test_accuracy = 0.0;
    rec.test_loss = 0.0;
  }
  for (const auto& run : runs) {
    for (std::size_t r = 0; r < res.rounds.size(); ++r) {
      res.rounds[r].test_accuracy += run.records[r].test_accuracy;
      res.rounds[r].test_loss += run.records[r].test_loss;
    }
  }
  double n = static_cast<double>(runs.size());
  for (auto& rec : res.rounds) {
    rec.test_accuracy /= n;
    rec.test_loss /= n;
  }
  return res;
}

BetaSweep sweep_beta(const SimConfig& cfg, const std::vector<double>& betas,
                     const std::vector<std::uint64_t>& seeds,
                     const Dataset& train, const Dataset& test, int threads) {
  BetaSweep sweep;
  std::vector<double> unique;
  for (double b : betas) {
    if (std::find(unique.begin(), unique.end(), b) != unique.end()) {
      sweep.warning = "duplicate beta values dropped";
      continue;
    }
    unique.push_back(b);
  }
  for (double b : unique) {
    SimConfig c = cfg;
    c.agg_proportion = b;
    ExperimentResult r = run_experiment(c, seeds, train, test, threads);
    sweep.points.push_back({b, r.rounds.back().test_accuracy});
  }
  return sweep;
}

void write_results(const ExperimentResult& result, const std::string& path,
                   OutputFormat format) {
  std::ostringstream out;
  if (format == OutputFormat::csv) {
    out << "round,sim_time_s,vehicle_id,upload_weight,train_weight,"
           "accuracy_pct,loss\n";
    for (const auto& r : result.rounds) {
      out << r.round << ',' << fmt_double(r.sim_time) << ',' << r.vehicle_id
          << ',' << fmt_double(r.upload_weight) << ','
          << fmt_double(r.train_weight) << ',' << fmt_double(r.test_accuracy)
          << ',' << fmt_double(r.test_loss) << '\n';
    }
  } else {
    nlohmann::json doc;
    doc["scheme"] = to_string(result.scheme);
    doc["seeds"] = result.seeds;
    doc["fingerprint"] = result.fingerprint;
    if (!result.warning.empty()) doc["warning"] = result.warning;
    nlohmann::json rounds = nlohmann::json::array();
    for (const auto& r : result.rounds) {
      rounds.push_back({{"round", r.round},
                        {"sim_time_s", r.sim_time},
                        {"vehicle_id", r.vehicle_id},
                        {"upload_weight", r.upload_weight},
                        {"train_weight", r.train_weight},
                        {"accuracy_pct", r.test_accuracy},
                        {"loss", r.test_loss}});
    }
    doc["rounds"] = std::move(rounds);
    out << doc.dump(2) << '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_results: cannot open " + path);
  f << out.str();
  if (!f) throw std::runtime_error("write_results: write failed: " + path);
}

ExperimentResult parse_results_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  ExperimentResult res;
  std::string scheme = doc.at("scheme").get<std::string>();
  res.scheme = scheme == "afl" ? Scheme::afl : Scheme::mafl;
  res.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
  res.fingerprint = doc.at("fingerprint").get<std::string>();
  if (doc.contains("warning")) res.warning = doc["warning"].get<std::string>();
  for (const auto& r : doc.at("rounds")) {
    RoundRecord rec;
    rec.round = r.at("round").get<int>();
    rec.sim_time = r.at("sim_time_s").get<double>();
    rec.vehicle_id = r.at("vehicle_id").get<int>();
    rec.upload_weight = r.at("upload_weight").get<double>();
    rec.train_weight = r.at("train_weight").get<double>();
    rec.test_accuracy = r.at("accuracy_pct").get<double>();
    rec.test_loss = r.at("loss").get<double>();
    res.rounds.push_back(rec);
  }
  return res;
}

void write_sweep(const BetaSweep& sweep, const std::string& path,
                 OutputFormat format) {
  std::ostringstream out;
  if (format == OutputFormat::csv) {
    out << "beta,final_accuracy_pct\n";
    for (const auto& p : sweep.points)
      out << fmt_double(p.beta) << ',' << fmt_double(p.final_accuracy_pct)
          << '\n';
  } else {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& p : sweep.points)
      doc.push_back({{"beta", p.beta},
                     {"final_accuracy_pct", p.final_accuracy_pct}});
    out << doc.dump(2) << '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_sweep: cannot open " + path);
  f << out.str();
}

}  // namespace mafl
