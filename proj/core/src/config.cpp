#include "mafl/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mafl/errors.hpp"
#include "mafl/rng.hpp"

namespace mafl {

namespace {

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("key '" + key + "': not a number: '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long n = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ParseError("key '" + key + "': not an integer: '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    std::uint64_t n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ParseError("key '" + key + "': not an unsigned integer: '" + v + "'");
  }
}

// One setter per config key. Keys use dotted namespaces; validation error
// messages use the bare field names.
using Setter = std::function<void(SimConfig&, const std::string&)>;

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = {
      {"sim.num_vehicles",
       [](SimConfig& c, const std::string& v) {
         c.num_vehicles = static_cast<int>(parse_int("sim.num_vehicles", v));
       }},
      {"sim.velocity",
       [](SimConfig& c, const std::string& v) {
         c.velocity = parse_double("sim.velocity", v);
       }},
      {"sim.rsu_height",
       [](SimConfig& c, const std::string& v) {
         c.rsu_height = parse_double("sim.rsu_height", v);
       }},
      {"sim.lane_offset",
       [](SimConfig& c, const std::string& v) {
         c.lane_offset = parse_double("sim.lane_offset", v);
       }},
      {"sim.cycles_per_sample",
       [](SimConfig& c, const std::string& v) {
         c.cycles_per_sample = parse_double("sim.cycles_per_sample", v);
       }},
      {"sim.model_size_bits",
       [](SimConfig& c, const std::string& v) {
         c.model_size_bits = parse_double("sim.model_size_bits", v);
       }},
      {"radio.bandwidth",
       [](SimConfig& c, const std::string& v) {
         c.bandwidth = parse_double("radio.bandwidth", v);
       }},
      {"radio.tx_power",
       [](SimConfig& c, const std::string& v) {
         c.tx_power = parse_double("radio.tx_power", v);
       }},
      {"radio.path_loss_exp",
       [](SimConfig& c, const std::string& v) {
         c.path_loss_exp = parse_double("radio.path_loss_exp", v);
       }},
      {"radio.noise_power",
       [](SimConfig& c, const std::string& v) {
         c.noise_power = parse_double("radio.noise_power", v);
       }},
      {"radio.noise_power_mw",
       [](SimConfig& c, const std::string& v) {
         // convenience alias: milliwatts in, watts stored
         c.noise_power = parse_double("radio.noise_power_mw", v) * 1e-3;
       }},
      {"radio.fading_rho",
       [](SimConfig& c, const std::string& v) {
         c.fading_rho = parse_double("radio.fading_rho", v);
       }},
      {"agg.proportion",
       [](SimConfig& c, const std::string& v) {
         c.agg_proportion = parse_double("agg.proportion", v);
       }},
      {"agg.upload_decay",
       [](SimConfig& c, const std::string& v) {
         c.upload_decay = parse_double("agg.upload_decay", v);
       }},
      {"agg.train_decay",
       [](SimConfig& c, const std::string& v) {
         c.train_decay = parse_double("agg.train_decay", v);
       }},
      {"run.rounds",
       [](SimConfig& c, const std::string& v) {
         c.num_rounds = static_cast<int>(parse_int("run.rounds", v));
       }},
      {"run.local_iters",
       [](SimConfig& c, const std::string& v) {
         c.local_iters = static_cast<int>(parse_int("run.local_iters", v));
       }},
      {"run.learning_rate",
       [](SimConfig& c, const std::string& v) {
         c.learning_rate = parse_double("run.learning_rate", v);
       }},
      {"run.slot_seconds",
       [](SimConfig& c, const std::string& v) {
         c.slot_seconds = parse_double("run.slot_seconds", v);
       }},
      {"run.coverage_half_width",
       [](SimConfig& c, const std::string& v) {
         c.coverage_half_width = parse_double("run.coverage_half_width", v);
       }},
      {"run.boundary_policy",
       [](SimConfig& c, const std::string& v) {
         if (v == "wrap") c.boundary_policy = BoundaryPolicy::wrap;
         else if (v == "exit") c.boundary_policy = BoundaryPolicy::exit;
         else throw ParseError("run.boundary_policy: expected wrap|exit, got '" + v + "'");
       }},
      {"run.seed",
       [](SimConfig& c, const std::string& v) {
         c.rng_seed = parse_u64("run.seed", v);
       }},
      {"run.scheme",
       [](SimConfig& c, const std::string& v) {
         if (v == "mafl") c.scheme = Scheme::mafl;
         else if (v == "afl") c.scheme = Scheme::afl;
         else throw ParseError("run.scheme: expected mafl|afl, got '" + v + "'");
       }},
      {"train.model",
       [](SimConfig& c, const std::string& v) {
         if (v == "softmax") c.model_kind = ModelKind::softmax_regression;
         else if (v == "mlp") c.model_kind = ModelKind::mlp_1hidden;
         else throw ParseError("train.model: expected softmax|mlp, got '" + v + "'");
       }},
      {"train.hidden_width",
       [](SimConfig& c, const std::string& v) {
         c.hidden_width = static_cast<int>(parse_int("train.hidden_width", v));
       }},
  };
  return table;
}

void set_key(SimConfig& cfg, const std::string& key, const std::string& value) {
  auto it = key_table().find(key);
  if (it == key_table().end()) throw ParseError("unknown config key '" + key + "'");
  it->second(cfg, value);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

void require(bool ok, const char* field, const std::string& msg) {
  if (!ok) throw ValidationError(field, std::string(field) + ": " + msg);
}

std::string fmt_double(double d) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  return buf;
}

void flatten_json(const nlohmann::json& node, const std::string& prefix,
                  SimConfig& cfg) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object()) {
      flatten_json(v, key, cfg);
    } else if (v.is_string()) {
      set_key(cfg, key, v.get<std::string>());
    } else if (v.is_number_integer()) {
      set_key(cfg, key, std::to_string(v.get<long long>()));
    } else if (v.is_number_unsigned()) {
      set_key(cfg, key, std::to_string(v.get<std::uint64_t>()));
    } else if (v.is_number_float()) {
      set_key(cfg, key, fmt_double(v.get<double>()));
    } else {
      throw ParseError("key '" + key + "': unsupported JSON value type");
    }
  }
}

}  // namespace

void SimConfig::validate() const {
  require(num_vehicles >= 1, "num_vehicles", "must be >= 1");
  require(velocity > 0, "velocity", "must be > 0");
  require(rsu_height > 0, "rsu_height", "must be > 0");
  require(lane_offset > 0, "lane_offset", "must be > 0");
  require(cycles_per_sample > 0, "cycles_per_sample", "must be > 0");
  require(model_size_bits > 0, "model_size_bits", "must be > 0");
  require(bandwidth > 0, "bandwidth", "must be > 0");
  require(tx_power > 0, "tx_power", "must be > 0");
  require(path_loss_exp > 0, "path_loss_exp", "must be > 0");
  require(noise_power > 0, "noise_power", "must be > 0");
  require(agg_proportion > 0 && agg_proportion < 1, "agg_proportion",
          "must lie strictly in (0,1)");
  require(upload_decay > 0 && upload_decay < 1, "upload_decay",
          "must lie strictly in (0,1)");
  require(train_decay > 0 && train_decay < 1, "train_decay",
          "must lie strictly in (0,1)");
  require(num_rounds >= 1, "num_rounds", "must be >= 1");
  require(local_iters >= 1, "local_iters", "must be >= 1");
  require(learning_rate > 0, "learning_rate", "must be > 0");
  require(slot_seconds > 0, "slot_seconds", "must be > 0");
  require(coverage_half_width > 0, "coverage_half_width", "must be > 0");
  require(fading_rho >= 0 && fading_rho < 1, "fading_rho",
          "must lie in [0,1)");
  require(hidden_width >= 1, "hidden_width", "must be >= 1");
}

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      set_key(cfg, key, value);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

SimConfig parse_config_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config JSON root must be an object");
  SimConfig cfg;
  flatten_json(doc, "", cfg);
  cfg.validate();
  return cfg;
}

void apply_overrides(SimConfig& cfg, const std::vector<ConfigOverride>& ovs) {
  for (const auto& ov : ovs) set_key(cfg, ov.key, ov.value);
  cfg.validate();
}

const char* to_string(BoundaryPolicy p) {
  return p == BoundaryPolicy::wrap ? "wrap" : "exit";
}
const char* to_string(Scheme s) { return s == Scheme::mafl ? "mafl" : "afl"; }
const char* to_string(ModelKind m) {
  return m == ModelKind::softmax_regression ? "softmax" : "mlp";
}

std::string serialize_config(const SimConfig& cfg) {
  std::ostringstream out;
  out << "sim.num_vehicles = " << cfg.num_vehicles << "\n";
  out << "sim.velocity = " << fmt_double(cfg.velocity) << "\n";
  out << "sim.rsu_height = " << fmt_double(cfg.rsu_height) << "\n";
  out << "sim.lane_offset = " << fmt_double(cfg.lane_offset) << "\n";
  out << "sim.cycles_per_sample = " << fmt_double(cfg.cycles_per_sample) << "\n";
  out << "sim.model_size_bits = " << fmt_double(cfg.model_size_bits) << "\n";
  out << "radio.bandwidth = " << fmt_double(cfg.bandwidth) << "\n";
  out << "radio.tx_power = " << fmt_double(cfg.tx_power) << "\n";
  out << "radio.path_loss_exp = " << fmt_double(cfg.path_loss_exp) << "\n";
  out << "radio.noise_power = " << fmt_double(cfg.noise_power) << "\n";
  out << "radio.fading_rho = " << fmt_double(cfg.fading_rho) << "\n";
  out << "agg.proportion = " << fmt_double(cfg.agg_proportion) << "\n";
  out << "agg.upload_decay = " << fmt_double(cfg.upload_decay) << "\n";
  out << "agg.train_decay = " << fmt_double(cfg.train_decay) << "\n";
  out << "run.rounds = " << cfg.num_rounds << "\n";
  out << "run.local_iters = " << cfg.local_iters << "\n";
  out << "run.learning_rate = " << fmt_double(cfg.learning_rate) << "\n";
  out << "run.slot_seconds = " << fmt_double(cfg.slot_seconds) << "\n";
  out << "run.coverage_half_width = " << fmt_double(cfg.coverage_half_width) << "\n";
  out << "run.boundary_policy = " << to_string(cfg.boundary_policy) << "\n";
  out << "run.seed = " << cfg.rng_seed << "\n";
  out << "run.scheme = " << to_string(cfg.scheme) << "\n";
  out << "train.model = " << to_string(cfg.model_kind) << "\n";
  out << "train.hidden_width = " << cfg.hidden_width << "\n";
  return out.str();
}

std::string config_fingerprint(const SimConfig& cfg) {
  // Fingerprint deliberately ignores the scheme so a mafl/afl pair over the
  // same conditions can be recognized as the same experiment.
  SimConfig canon = cfg;
  canon.scheme = Scheme::mafl;
  std::string s = serialize_config(canon);
  std::uint64_t h = hash_tag(s);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<VehicleProfile> default_profiles(const SimConfig& cfg) {
  cfg.validate();
  std::vector<VehicleProfile> out;
  out.reserve(cfg.num_vehicles);
  for (int i = 1; i <= cfg.num_vehicles; ++i) {
    VehicleProfile p;
    p.vehicle_id = i;
    p.data_count = 2250 + 3750L * i;
    p.cpu_freq = 1.5 * (i + 5) * 1e8;
    Rng rng(derive_seed(cfg.rng_seed, "initial-position", i));
    p.initial_x = rng.uniform(-cfg.coverage_half_width, cfg.coverage_half_width);
    out.push_back(p);
  }
  return out;
}

}  // namespace mafl
