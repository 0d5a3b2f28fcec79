// Command-line front end: run/compare/sweep-beta experiments, generate
// synthetic datasets, validate configuration files.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mafl/dataset.hpp"
#include "mafl/errors.hpp"
#include "mafl/experiment.hpp"

namespace fs = std::filesystem;
using namespace mafl;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  int rounds = -1;
  double beta = -1.0;
  std::string scheme;
  std::string data = "synth";
  std::string out;
  std::string format = "csv";
  int threads = 1;
  std::uint64_t synth_seed = 42;
  std::size_t synth_train = 60000;
  std::size_t synth_test = 10000;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_data = true) {
  cmd->add_option("--config", o.config_path, "config file (.json or key=value text)");
  cmd->add_option("--seed", o.seeds, "experiment seed (repeatable)");
  cmd->add_option("--rounds", o.rounds, "number of aggregation rounds M");
  cmd->add_option("--scheme", o.scheme, "mafl|afl")
      ->check(CLI::IsMember({"mafl", "afl"}));
  cmd->add_option("--out", o.out, "output file path");
  cmd->add_option("--format", o.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", o.threads, "worker threads for seed runs");
  if (with_data) {
    cmd->add_option("--data", o.data, "mnist:PATH | mnist | synth");
    cmd->add_option("--synth-seed", o.synth_seed, "synthetic dataset seed");
    cmd->add_option("--synth-train", o.synth_train, "synthetic train size");
    cmd->add_option("--synth-test", o.synth_test, "synthetic test size");
  }
}

SimConfig load_config(const CommonOpts& o) {
  SimConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream f(o.config_path);
    if (!f) throw ParseError("cannot open config file " + o.config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    if (fs::path(o.config_path).extension() == ".json")
      cfg = parse_config_json(ss.str());
    else
      cfg = parse_config(ss.str());
  }
  // flag overrides take precedence over file values
  if (o.rounds > 0) cfg.num_rounds = o.rounds;
  if (o.beta >= 0.0) cfg.agg_proportion = o.beta;
  if (o.scheme == "mafl") cfg.scheme = Scheme::mafl;
  if (o.scheme == "afl") cfg.scheme = Scheme::afl;
  cfg.validate();
  return cfg;
}

std::pair<Dataset, Dataset> load_data(const CommonOpts& o) {
  if (o.data == "synth")
    return synth_pair(o.synth_seed, o.synth_train, o.synth_test, 10);
  std::string dir;
  if (o.data == "mnist") {
    const char* env = std::getenv("MAFL_DATA_DIR");
    if (!env)
      throw DataError("--data mnist requires MAFL_DATA_DIR or mnist:PATH");
    dir = env;
  } else if (o.data.rfind("mnist:", 0) == 0) {
    dir = o.data.substr(6);
  } else {
    throw DataError("unrecognized --data value '" + o.data + "'");
  }
  return load_mnist(dir);
}

std::vector<std::uint64_t> seeds_or_default(const CommonOpts& o) {
  return o.seeds.empty() ? std::vector<std::uint64_t>{1} : o.seeds;
}

OutputFormat format_of(const CommonOpts& o) {
  return o.format == "json" ? OutputFormat::json : OutputFormat::csv;
}

std::string with_scheme_suffix(const std::string& path, const char* scheme) {
  fs::path p(path);
  fs::path stem = p.stem();
  stem += std::string(".") + scheme;
  stem += p.extension();
  return (p.parent_path() / stem).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous federated learning simulator for an edge-assisted vehicular network"};
  app.require_subcommand(1);

  CommonOpts run_o, cmp_o, sweep_o, synth_o, val_o;

  auto* run = app.add_subcommand("run", "run one experiment");
  add_common(run, run_o);
  run->add_option("--beta", run_o.beta, "aggregation proportion");

  auto* cmp = app.add_subcommand("compare", "run mafl and afl on shared seeds");
  add_common(cmp, cmp_o);
  cmp->add_option("--beta", cmp_o.beta, "aggregation proportion");

  auto* sweep = app.add_subcommand("sweep-beta", "final accuracy per beta");
  add_common(sweep, sweep_o);
  std::vector<double> sweep_betas;
  sweep->add_option("--beta", sweep_betas, "beta value (repeatable)")
      ->required();

  auto* synth = app.add_subcommand("gen-synth", "emit a synthetic dataset as IDX files");
  synth->add_option("--out", synth_o.out, "output directory")->required();
  synth->add_option("--seed", synth_o.synth_seed, "dataset seed");
  synth->add_option("--train", synth_o.synth_train, "train samples");
  synth->add_option("--test", synth_o.synth_test, "test samples");

  auto* val = app.add_subcommand("validate-config", "check a config file");
  val->add_option("--config", val_o.config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      SimConfig cfg = load_config(run_o);
      auto [train, test] = load_data(run_o);
      ExperimentResult res = run_experiment(cfg, seeds_or_default(run_o),
                                            train, test, run_o.threads);
      if (!res.warning.empty()) std::cerr << "warning: " << res.warning << "\n";
      std::string out = run_o.out.empty()
                            ? std::string("results.") + run_o.format
                            : run_o.out;
      write_results(res, out, format_of(run_o));
      std::cout << "wrote " << out << " (final accuracy "
                << res.rounds.back().test_accuracy << "%)\n";
    } else if (cmp->parsed()) {
      SimConfig cfg = load_config(cmp_o);
      auto [train, test] = load_data(cmp_o);
      auto seeds = seeds_or_default(cmp_o);
      std::string out = cmp_o.out.empty()
                            ? std::string("compare.") + cmp_o.format
                            : cmp_o.out;
      for (const char* scheme : {"mafl", "afl"}) {
        SimConfig c = cfg;
        c.scheme = scheme == std::string("afl") ? Scheme::afl : Scheme::mafl;
        ExperimentResult res =
            run_experiment(c, seeds, train, test, cmp_o.threads);
        std::string path = with_scheme_suffix(out, scheme);
        write_results(res, path, format_of(cmp_o));
        std::cout << "wrote " << path << " (final accuracy "
                  << res.rounds.back().test_accuracy << "%)\n";
      }
    } else if (sweep->parsed()) {
      SimConfig cfg = load_config(sweep_o);
      auto [train, test] = load_data(sweep_o);
      BetaSweep res = sweep_beta(cfg, sweep_betas, seeds_or_default(sweep_o),
                                 train, test, sweep_o.threads);
      if (!res.warning.empty()) std::cerr << "warning: " << res.warning << "\n";
      std::string out = sweep_o.out.empty()
                            ? std::string("sweep.") + sweep_o.format
                            : sweep_o.out;
      write_sweep(res, out, format_of(sweep_o));
      std::cout << "wrote " << out << "\n";
    } else if (synth->parsed()) {
      auto [train, test] =
          synth_pair(synth_o.synth_seed, synth_o.synth_train,
                     synth_o.synth_test, 10);
      fs::create_directories(synth_o.out);
      fs::path dir(synth_o.out);
      write_idx_pair(train, (dir / "train-images-idx3-ubyte").string(),
                     (dir / "train-labels-idx1-ubyte").string());
      write_idx_pair(test, (dir / "t10k-images-idx3-ubyte").string(),
                     (dir / "t10k-labels-idx1-ubyte").string());
      std::cout << "wrote " << synth_o.synth_train << "/" << synth_o.synth_test
                << " samples to " << synth_o.out << "\n";
    } else if (val->parsed()) {
      load_config(val_o);
      std::cout << "config OK\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
