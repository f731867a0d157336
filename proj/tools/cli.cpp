#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>

#include "eprbm/bell.hpp"
#include "eprbm/epr.hpp"
#include "eprbm/errors.hpp"
#include "eprbm/exact.hpp"
#include "eprbm/model_io.hpp"
#include "eprbm/trainer.hpp"

#ifndef EPRBM_VERSION
#define EPRBM_VERSION "0.0.0"
#endif

namespace eprbm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kLocalityTolerance = 1e-10;
constexpr double kIndependenceTolerance = 1e-3;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path() && !fs::exists(path.parent_path())) {
    throw IoError("output directory does not exist: " +
                  path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void write_json_file(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + " is not valid JSON: " + e.what());
  }
}

fs::path sidecar_path(const fs::path& dataset) {
  fs::path p = dataset;
  return p.replace_extension(".meta.json");
}

fs::path default_manifest_path(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

std::vector<EprTrial> load_trials(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset " + path.string());
  return read_dataset_csv(in);
}

DetectorAngles parse_angles(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (item.empty() || pos != item.size() || !std::isfinite(v)) {
      throw UsageError("invalid angle '" + item + "' in --angles");
    }
    values.push_back(v);
  }
  if (values.size() != 4) {
    throw UsageError("--angles takes exactly four comma-separated radians: a,a',b,b'");
  }
  return {values[0], values[1], values[2], values[3]};
}

void print_report(const CorrelationReport& r, std::ostream& out) {
  for (std::size_t k = 0; k < 4; ++k) {
    const double c = r.at(static_cast<int>(k / 2), static_cast<int>(k % 2));
    out << std::left << std::setw(9) << kComparisonRows[k] << std::right
        << "= " << fmt("%.3f", c) << '\n';
  }
  out << std::left << std::setw(9) << "S" << std::right << "= "
      << fmt("%.3f", r.s) << '\n';
}

std::string pair_label(int k) {
  static constexpr const char* kLabels[4] = {"a,b", "a,b'", "a',b", "a',b'"};
  return kLabels[k];
}

struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  json config = json::object();
  json seeds = json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

void write_manifest(const fs::path& path, const Manifest& m,
                    std::chrono::steady_clock::time_point started) {
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  write_json_file(path, {{"command", m.command},
                         {"argv", m.argv},
                         {"config", m.config},
                         {"seeds", m.seeds},
                         {"inputs", m.inputs},
                         {"outputs", m.outputs},
                         {"tool_version", EPRBM_VERSION},
                         {"wall_clock_seconds", seconds}});
}

json seed_streams(std::uint64_t master) {
  return {{"master", master},
          {"data", derive_seed(master, Stream::data)},
          {"init", derive_seed(master, Stream::init)},
          {"chains", derive_seed(master, Stream::chains)},
          {"shuffle", derive_seed(master, Stream::shuffle)}};
}

// --- simulate ---------------------------------------------------------------

struct SimulateOptions {
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  std::string angles;
  std::string out;
  std::string manifest;
};

int cmd_simulate(const SimulateOptions& opt, const std::vector<std::string>& argv,
                 std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const DetectorAngles angles =
      opt.angles.empty() ? DetectorAngles{} : parse_angles(opt.angles);
  if (opt.trials == 0) throw UsageError("--trials must be at least 1");

  const EprDataset dataset = generate_dataset(angles, opt.trials, opt.seed);
  const fs::path data_path = opt.out;
  {
    auto f = open_out(data_path);
    write_dataset_csv(dataset, f);
    finish(f, data_path);
  }
  const fs::path meta_path = sidecar_path(data_path);
  write_json_file(meta_path, dataset_sidecar(dataset));

  Manifest manifest{"simulate", argv};
  manifest.config = {{"trials", opt.trials}, {"angles", angles_to_json(angles)}};
  manifest.seeds = seed_streams(opt.seed);
  manifest.outputs = {data_path.string(), meta_path.string()};
  write_manifest(opt.manifest.empty() ? default_manifest_path(data_path)
                                      : fs::path(opt.manifest),
                 manifest, started);

  out << "wrote " << dataset.trials.size() << " trials to " << data_path.string()
      << " (seed " << opt.seed << ")\n";
  try {
    print_report(empirical_correlations(dataset), out);
  } catch (const InsufficientDataError& e) {
    err << "eprbm simulate: cannot report correlations: " << e.what() << '\n';
    return kDataError;
  }
  return kSuccess;
}

// --- train -------------------------------------------------------------------

struct TrainOptions {
  std::string data;
  std::string config;
  std::string out;
  std::string trace;
  std::string manifest;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  std::optional<double> learning_rate;
  std::optional<double> decay;
  std::optional<int> batch_size;
  std::optional<int> chains;
  std::optional<int> k;
  std::optional<double> init_scale;
  std::optional<int> hidden;
  std::string model_term;
};

void write_trace(const fs::path& path, const TrainingTrace& trace) {
  auto f = open_out(path);
  f << "epoch,log_likelihood,s\n";
  for (const auto& rec : trace) {
    f << rec.epoch << ',' << fmt("%.17g", rec.log_likelihood) << ','
      << (rec.chsh ? fmt("%.17g", *rec.chsh) : std::string{}) << '\n';
  }
  finish(f, path);
}

int cmd_train(const TrainOptions& opt, const std::vector<std::string>& argv,
              std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  TrainerConfig config;
  bool seed_given = false;
  if (!opt.config.empty()) {
    const json j = read_json_file(opt.config);
    config = trainer_config_from_json(j);
    seed_given = j.contains("seed");
  }
  if (opt.seed) {
    config.seed = *opt.seed;
    seed_given = true;
  }
  if (!seed_given) {
    throw UsageError("a master seed is required (--seed or \"seed\" in --config)");
  }
  if (opt.epochs) config.n_epochs = *opt.epochs;
  if (opt.learning_rate) config.learning_rate = *opt.learning_rate;
  if (opt.decay) config.learning_rate_decay = *opt.decay;
  if (opt.batch_size) config.batch_size = *opt.batch_size;
  if (opt.chains) config.n_persistent_chains = *opt.chains;
  if (opt.k) config.gibbs_steps_per_update = *opt.k;
  if (opt.init_scale) config.weight_init_scale = *opt.init_scale;
  if (opt.hidden) config.n_hidden = *opt.hidden;
  if (!opt.model_term.empty()) {
    config.model_term = opt.model_term == "exact" ? ModelTerm::exact : ModelTerm::pcd;
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  EprDataset dataset;
  dataset.trials = load_trials(opt.data);
  if (dataset.trials.empty()) {
    throw InsufficientDataError("dataset " + opt.data + " has no trials");
  }
  std::optional<std::uint64_t> dataset_seed;
  std::optional<DetectorAngles> angles;
  if (const fs::path meta = sidecar_path(opt.data); fs::exists(meta)) {
    const json j = read_json_file(meta);
    if (j.contains("seed")) dataset_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("angles")) angles = angles_from_json(j["angles"]);
  }

  const fs::path model_path = opt.out;
  const fs::path trace_path =
      opt.trace.empty() ? fs::path(model_path).replace_extension(".trace.csv")
                        : fs::path(opt.trace);

  Manifest manifest{"train", argv};
  manifest.config = trainer_config_to_json(config);
  manifest.seeds = seed_streams(config.seed);
  manifest.inputs = {opt.data};
  manifest.outputs = {model_path.string(), trace_path.string()};
  const fs::path manifest_path = opt.manifest.empty()
                                     ? default_manifest_path(model_path)
                                     : fs::path(opt.manifest);

  TrainingResult result;
  try {
    result = train(dataset, config);
  } catch (const DivergenceError& e) {
    write_trace(trace_path, e.partial_trace());
    manifest.outputs = {trace_path.string()};
    write_manifest(manifest_path, manifest, started);
    err << "eprbm train: " << e.what() << "; partial trace in "
        << trace_path.string() << '\n';
    return kDivergence;
  }

  {
    auto f = open_out(model_path);
    write_model_json(ModelFile{result.model, config, dataset_seed, angles}, f);
    finish(f, model_path);
  }
  write_trace(trace_path, result.trace);
  write_manifest(manifest_path, manifest, started);

  out << "trained " << config.n_epochs << " epochs on " << dataset.trials.size()
      << " trials; model written to " << model_path.string() << '\n';
  if (result.model.num_visible() == 4) {
    print_report(model_correlations_exact(result.model), out);
  }
  return kSuccess;
}

// --- eval --------------------------------------------------------------------

struct EvalOptions {
  std::string model;
  std::string data;
  std::string out;
  std::string manifest;
};

int cmd_eval(const EvalOptions& opt, const std::vector<std::string>& argv,
             std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const ModelFile file = load_model_file(opt.model);
  const CorrelationReport model = model_correlations_exact(file.model);
  const CorrelationReport theory =
      theory_correlations(file.angles.value_or(DetectorAngles{}));
  std::optional<CorrelationReport> data;
  if (!opt.data.empty()) data = empirical_correlations(load_trials(opt.data));

  const ComparisonTable table = comparison_table(theory, data, model);
  render_text(table, out);
  out << bell_verdict(model.s) << '\n';

  Manifest manifest{"eval", argv};
  manifest.inputs = {opt.model};
  if (!opt.data.empty()) manifest.inputs.push_back(opt.data);
  if (!opt.out.empty()) {
    const fs::path csv_path = opt.out;
    auto f = open_out(csv_path);
    render_csv(table, f);
    finish(f, csv_path);
    manifest.outputs = {csv_path.string()};
  }
  if (!opt.manifest.empty() || !opt.out.empty()) {
    write_manifest(opt.manifest.empty() ? default_manifest_path(opt.out)
                                        : fs::path(opt.manifest),
                   manifest, started);
  }
  return kSuccess;
}

// --- diagnose ----------------------------------------------------------------

struct DiagnoseOptions {
  std::string model;
  std::string out;
  std::string manifest;
};

int cmd_diagnose(const DiagnoseOptions& opt, const std::vector<std::string>& argv,
                 std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const ModelFile file = load_model_file(opt.model);
  require_epr_layout(file.model);
  const ExactDistribution dist = enumerate(file.model);
  const double residual = locality_check(dist);
  const MeasurementIndependenceReport mi = measurement_independence_check(dist);
  const bool locality_pass = residual <= kLocalityTolerance;
  const bool mi_violated = mi.max_total_variation > kIndependenceTolerance;

  const int n = static_cast<int>(file.model.num_hidden());
  out << "Bell locality (factorizability)\n"
      << "  max residual " << fmt("%.3e", residual) << '\n';
  out << "Hidden-state distributions P(lambda | alpha, beta)\n";
  out << "  lambda  ";
  for (int k = 0; k < 4; ++k) out << std::setw(9) << pair_label(k);
  out << std::setw(9) << "pooled" << '\n';
  for (std::size_t h = 0; h < dist.num_hidden_states(); ++h) {
    std::string bits;
    for (auto b : index_bits(h, n)) bits += static_cast<char>('0' + b);
    out << "  " << std::left << std::setw(8) << bits << std::right;
    for (int k = 0; k < 4; ++k) {
      out << std::setw(9) << fmt("%.4f", mi.hidden_given_settings[k][h]);
    }
    out << std::setw(9) << fmt("%.4f", mi.pooled[h]) << '\n';
  }
  out << "  TV to pooled";
  for (int k = 0; k < 4; ++k) out << std::setw(9) << fmt("%.4f", mi.total_variation[k]);
  out << '\n';
  out << "locality: " << (locality_pass ? "PASS" : "FAIL") << " (max residual "
      << fmt("%.3e", residual) << (locality_pass ? " <= " : " > ") << "1e-10)\n";
  out << "measurement independence: "
      << (mi_violated ? "VIOLATED" : "not violated") << " (max TV "
      << fmt("%.4f", mi.max_total_variation) << (mi_violated ? " > " : " <= ")
      << "1e-3)\n";

  Manifest manifest{"diagnose", argv};
  manifest.inputs = {opt.model};
  if (!opt.out.empty()) {
    json conditionals = json::object();
    json tv = json::object();
    for (int k = 0; k < 4; ++k) {
      conditionals[pair_label(k)] = mi.hidden_given_settings[k];
      tv[pair_label(k)] = mi.total_variation[k];
    }
    std::vector<std::string> states;
    for (std::size_t h = 0; h < dist.num_hidden_states(); ++h) {
      std::string bits;
      for (auto b : index_bits(h, n)) bits += static_cast<char>('0' + b);
      states.push_back(bits);
    }
    const json report = {
        {"locality",
         {{"max_residual", residual},
          {"tolerance", kLocalityTolerance},
          {"pass", locality_pass}}},
        {"measurement_independence",
         {{"hidden_states", states},
          {"hidden_given_settings", conditionals},
          {"pooled", mi.pooled},
          {"total_variation", tv},
          {"max_total_variation", mi.max_total_variation},
          {"tolerance", kIndependenceTolerance},
          {"violated", mi_violated}}},
    };
    write_json_file(opt.out, report);
    manifest.outputs = {opt.out};
  }
  if (!opt.manifest.empty() || !opt.out.empty()) {
    write_manifest(opt.manifest.empty() ? default_manifest_path(opt.out)
                                        : fs::path(opt.manifest),
                   manifest, started);
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Train and analyse a restricted Boltzmann machine on EPR data",
               "eprbm"};
  app.set_version_flag("--version", EPRBM_VERSION);
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate singlet EPR trials");
  simulate->add_option("--trials", sim.trials, "Number of trials")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--angles", sim.angles,
                       "Detector angles a,a',b,b' in radians (default 0,pi/2,pi/4,-pi/4)");
  simulate->add_option("--out", sim.out, "Dataset CSV path")->required();
  simulate->add_option("--manifest", sim.manifest, "Manifest path");

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train an RBM with PCD");
  train_cmd->add_option("--data", tr.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--config", tr.config, "Trainer config JSON")->check(CLI::ExistingFile);
  train_cmd->add_option("--out", tr.out, "Model JSON path")->required();
  train_cmd->add_option("--trace", tr.trace, "Trace CSV path (default <out>.trace.csv)");
  train_cmd->add_option("--manifest", tr.manifest, "Manifest path");
  train_cmd->add_option("--seed", tr.seed, "Master seed");
  train_cmd->add_option("--epochs", tr.epochs, "Epochs");
  train_cmd->add_option("--lr", tr.learning_rate, "Learning rate");
  train_cmd->add_option("--decay", tr.decay, "Learning-rate decay per epoch");
  train_cmd->add_option("--batch-size", tr.batch_size, "Minibatch size");
  train_cmd->add_option("--chains", tr.chains, "Persistent chains");
  train_cmd->add_option("--k", tr.k, "Gibbs sweeps per update");
  train_cmd->add_option("--init-scale", tr.init_scale, "Initial weight std-dev");
  train_cmd->add_option("--hidden", tr.hidden, "Hidden units");
  train_cmd->add_option("--model-term", tr.model_term, "Negative phase")
      ->check(CLI::IsMember({"pcd", "exact"}));

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Compare model correlations with theory and data");
  eval->add_option("--model", ev.model, "Model JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--data", ev.data, "Dataset CSV")->check(CLI::ExistingFile);
  eval->add_option("--out", ev.out, "Comparison CSV path");
  eval->add_option("--manifest", ev.manifest, "Manifest path");

  DiagnoseOptions dg;
  auto* diagnose = app.add_subcommand("diagnose", "Locality and measurement-independence diagnostics");
  diagnose->add_option("--model", dg.model, "Model JSON")->required()->check(CLI::ExistingFile);
  diagnose->add_option("--out", dg.out, "Report JSON path");
  diagnose->add_option("--manifest", dg.manifest, "Manifest path");

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", replay_path, "Manifest JSON")->required()->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "simulate") return cmd_simulate(sim, args, out, err);
    if (name == "train") return cmd_train(tr, args, out, err);
    if (name == "eval") return cmd_eval(ev, args, out);
    if (name == "diagnose") return cmd_diagnose(dg, args, out);
    const json manifest = read_json_file(replay_path);
    if (!manifest.contains("argv") || !manifest["argv"].is_array()) {
      throw ParseError("manifest has no argv array");
    }
    const auto recorded = manifest["argv"].get<std::vector<std::string>>();
    if (!recorded.empty() && recorded.front() == "replay") {
      throw UsageError("refusing to replay a replay manifest");
    }
    return run(recorded, out, err);
  } catch (const UsageError& e) {
    err << "eprbm " << name << ": " << e.what() << '\n';
    return kUsage;
  } catch (const DivergenceError& e) {
    err << "eprbm " << name << ": " << e.what() << '\n';
    return kDivergence;
  } catch (const ParseError& e) {
    err << "eprbm " << name << ": " << e.what() << '\n';
    return kDataError;
  } catch (const InsufficientDataError& e) {
    err << "eprbm " << name << ": " << e.what() << '\n';
    return kDataError;
  } catch (const DimensionError& e) {
    err << "eprbm " << name << ": " << e.what() << '\n';
    return kDataError;
  } catch (const TooLargeError& e) {
    err << "eprbm " << name << ": " << e.what() << '\n';
    return kDataError;
  } catch (const IoError& e) {
    err << "eprbm " << name << ": " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "eprbm " << name << ": " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace eprbm::cli
