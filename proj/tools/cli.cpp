#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neurobands/checkpoint.hpp"
#include "neurobands/electrode_sets.hpp"
#include "neurobands/errors.hpp"
#include "neurobands/features.hpp"
#include "neurobands/harness.hpp"
#include "neurobands/portable_io.hpp"
#include "neurobands/preprocess.hpp"
#include "neurobands/report.hpp"
#include "neurobands/synth.hpp"

namespace neurobands::cli {

namespace {

// Raised for bad flag values discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, LabelColumn> kLabelNames = {{"valence", LabelColumn::valence},
                                                        {"arousal", LabelColumn::arousal},
                                                        {"dominance", LabelColumn::dominance},
                                                        {"liking", LabelColumn::liking}};

const std::map<std::string, InputMode> kModeNames = {{"preprocessed", InputMode::preprocessed},
                                                     {"raw", InputMode::raw}};

const std::map<std::string, SplitGranularity> kSplitNames = {{"window", SplitGranularity::window},
                                                             {"trial", SplitGranularity::trial}};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NEUROBANDS_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("NEUROBANDS_SEED is not an unsigned integer: ") + env);
  }
  return fallback;
}

BandName band_flag(const std::string& name) {
  auto b = parse_band(name);
  if (!b) throw UsageError("unknown band '" + name + "'");
  return *b;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << text;
  if (!f) throw IoError("write failed for " + path);
}

// Shared by features/compare/train.
struct PipelineFlags {
  std::vector<std::string> inputs;
  std::size_t window = 256;
  std::size_t step = 16;
  std::string label = "valence";
  double threshold = kDefaultThreshold;
  std::string input_mode = "preprocessed";
  double baseline_s = 3.0;
  std::size_t jobs = 1;

  void add_to(CLI::App* app) {
    app->add_option("--in", inputs, "EEGB recording(s)")->required();
    app->add_option("--window", window, "FFT window size (power of two)")->capture_default_str();
    app->add_option("--step", step, "window step in samples")->capture_default_str();
    app->add_option("--label", label, "rating to binarize")
        ->check(CLI::IsMember({"valence", "arousal", "dominance", "liking"}))
        ->capture_default_str();
    app->add_option("--threshold", threshold, "high class iff rating >= threshold")->capture_default_str();
    app->add_option("--input-mode", input_mode, "raw: full conditioning chain; preprocessed: trim only")
        ->check(CLI::IsMember({"raw", "preprocessed"}))
        ->capture_default_str();
    app->add_option("--baseline", baseline_s, "seconds of pre-trial baseline to trim")->capture_default_str();
    app->add_option("--jobs", jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  }

  WindowPlan plan() const {
    WindowPlan p{window, step};
    try {
      p.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return p;
  }

  LabelConfig label_config() const {
    if (!(threshold > 1.0 && threshold < 9.0)) throw UsageError("--threshold must lie in (1, 9)");
    return {kLabelNames.at(label), threshold};
  }

  std::vector<Recording> load() const {
    ChainConfig chain;
    chain.mode = kModeNames.at(input_mode);
    chain.baseline_s = baseline_s;
    std::vector<Recording> recs;
    for (const auto& path : inputs) recs.push_back(preprocess_recording(load_portable(path), chain));
    return recs;
  }
};

int cmd_synth(const SynthSpec& base, const std::string& out_path, const std::optional<std::uint64_t>& seed,
              const std::string& class0, const std::string& class1, const std::optional<double>& hz0,
              const std::optional<double>& hz1, const std::vector<std::string>& signal, std::ostream& out) {
  SynthSpec spec = base;
  spec.seed = resolve_seed(seed, 42);
  spec.class_band_map = {band_flag(class0), band_flag(class1)};
  spec.tone_hz = {hz0, hz1};
  for (const auto& name : signal) {
    auto e = find_electrode(name);
    if (!e) throw MontageError(name, "unknown electrode");
    spec.signal_channels.push_back(e->index);
  }
  try {
    write_portable(out_path, synth_dataset(spec));
  } catch (const SpecError& e) {
    throw UsageError(e.what());
  }
  out << "wrote " << out_path << " (" << spec.n_trials << " trials x " << spec.n_channels << " channels x "
      << spec.n_samples << " samples)\n";
  return kExitOk;
}

ElectrodeSet single_set(const std::string& selector) {
  auto sets = parse_selector(selector);
  if (sets.size() != 1) throw UsageError("--set must name exactly one electrode set");
  return sets.front();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"EEG band-power valence recognition and electrode-set comparison"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "write a band-coded synthetic recording");
  SynthSpec synth_spec;
  std::string synth_out;
  std::optional<std::uint64_t> synth_seed;
  std::string class0 = "theta", class1 = "gamma";
  std::optional<double> hz0, hz1;
  std::vector<std::string> signal_channels;
  synth->add_option("--out", synth_out, "output EEGB file")->required();
  synth->add_option("--trials", synth_spec.n_trials)->capture_default_str();
  synth->add_option("--channels", synth_spec.n_channels)->capture_default_str();
  synth->add_option("--samples", synth_spec.n_samples)->capture_default_str();
  synth->add_option("--rate", synth_spec.sample_rate_hz)->capture_default_str();
  synth->add_option("--noise", synth_spec.noise_amplitude, "Gaussian noise amplitude")->capture_default_str();
  synth->add_option("--amplitude", synth_spec.tone_amplitude, "tone amplitude")->capture_default_str();
  synth->add_option("--class0-band", class0)->capture_default_str();
  synth->add_option("--class1-band", class1)->capture_default_str();
  synth->add_option("--class0-hz", hz0, "class 0 tone (default: band midpoint)");
  synth->add_option("--class1-hz", hz1, "class 1 tone (default: band midpoint)");
  synth->add_option("--signal-channels", signal_channels, "electrodes carrying the tone (default all)")
      ->delimiter(',');
  synth->add_option("--subject", synth_spec.subject_id)->capture_default_str();
  synth->add_option("--seed", synth_seed, "RNG seed (fallback NEUROBANDS_SEED, then 42)");

  // features
  auto* features = app.add_subcommand("features", "extract windowed band-power features");
  PipelineFlags feat_flags;
  std::string feat_set = "set09", feat_out;
  feat_flags.add_to(features);
  features->add_option("--set", feat_set, "setNN | lobe:NAME | custom:E1,E2,...")->capture_default_str();
  features->add_option("--out", feat_out, "output features container")->required();

  // compare
  auto* compare = app.add_subcommand("compare", "train and evaluate electrode sets");
  PipelineFlags cmp_flags;
  cmp_flags.add_to(compare);
  std::string cmp_sets = "all";
  bool cmp_lobes = false, cmp_sweep = false, per_subject = false;
  std::size_t epochs = 50, batch = 64;
  double lr = 1e-3, train_fraction = 0.8;
  std::optional<std::uint64_t> cmp_seed;
  std::string split_mode = "window";
  std::string report_csv, report_json, bars_path, curve_path, history_path;
  NetworkConfig net_cfg;
  compare->add_option("--sets", cmp_sets, "all | setNN[,setNN...] | lobe:NAME | custom:E1,E2,...")
      ->capture_default_str();
  compare->add_flag("--lobes", cmp_lobes, "compare the five lobe groupings");
  compare->add_flag("--sweep", cmp_sweep, "electrode-count sweep over sets 4,3,8,5,1,9");
  compare->add_option("--epochs", epochs)->capture_default_str()->check(CLI::PositiveNumber);
  compare->add_option("--batch-size", batch)->capture_default_str()->check(CLI::PositiveNumber);
  compare->add_option("--lr", lr, "Adam learning rate")->capture_default_str();
  compare->add_option("--seed", cmp_seed, "split/init/shuffle seed (fallback NEUROBANDS_SEED, then 42)");
  compare->add_option("--split", split_mode, "split granularity")
      ->check(CLI::IsMember({"window", "trial"}))
      ->capture_default_str();
  compare->add_option("--train-fraction", train_fraction)->capture_default_str();
  compare->add_flag("--per-subject", per_subject, "train/test within each subject instead of pooling");
  compare->add_option("--conv-channels", net_cfg.conv_channels)->capture_default_str();
  compare->add_option("--dense-hidden", net_cfg.dense_hidden)->capture_default_str();
  compare->add_option("--residual-blocks", net_cfg.n_residual_blocks)->capture_default_str();
  compare->add_option("--dropout", net_cfg.dropout_rate)->capture_default_str();
  compare->add_option("--report", report_csv, "CSV report path");
  compare->add_option("--json", report_json, "JSON report path");
  compare->add_option("--bars", bars_path, "bar-chart CSV path");
  compare->add_option("--curve", curve_path, "accuracy-vs-count CSV path (with --sweep)");
  compare->add_option("--history", history_path, "per-epoch training curve CSV path");

  // train
  auto* train_cmd = app.add_subcommand("train", "train one network on a features container");
  std::string train_features, train_model;
  std::size_t train_epochs = 50;
  std::optional<std::uint64_t> train_seed;
  train_cmd->add_option("--features", train_features, "features container")->required();
  train_cmd->add_option("--model", train_model, "output model checkpoint")->required();
  train_cmd->add_option("--epochs", train_epochs)->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", train_seed);

  // sets
  auto* sets_cmd = app.add_subcommand("sets", "print electrode sets as JSON");
  std::string sets_select = "all,lobes";
  sets_cmd->add_option("--select", sets_select)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (*synth) {
      return cmd_synth(synth_spec, synth_out, synth_seed, class0, class1, hz0, hz1, signal_channels, out);
    }

    if (*features) {
      const auto plan = feat_flags.plan();
      const auto label = feat_flags.label_config();
      const auto set = single_set(feat_set);
      const auto recs = feat_flags.load();
      FeatureSet all;
      for (const auto& rec : recs) all.append(extract_features(rec, set, plan, label, feat_flags.jobs));
      write_features(feat_out, all);
      out << "wrote " << feat_out << " (" << all.n_rows << " rows x " << all.n_cols() << " columns, set "
          << set.id << ")\n";
      return kExitOk;
    }

    if (*compare) {
      HarnessConfig cfg;
      cfg.window = cmp_flags.plan();
      cfg.label = cmp_flags.label_config();
      if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw UsageError("--train-fraction must lie in (0, 1)");
      const std::uint64_t seed = resolve_seed(cmp_seed, 42);
      std::vector<ElectrodeSet> sets;
      if (cmp_sweep) {
        for (int n : kSweepSets) sets.push_back(literature_set(n));
      } else {
        sets = parse_selector(cmp_lobes ? "lobes" : cmp_sets);
      }
      net_cfg.seed = seed;
      try {
        NetworkConfig probe = net_cfg;
        probe.input_dim = 5 * sets.front().size();
        probe.validate();
      } catch (const ConfigError& e) {
        throw UsageError(e.what());
      }
      cfg.network = net_cfg;
      cfg.train.epochs = epochs;
      cfg.train.batch_size = batch;
      cfg.train.learning_rate = lr;
      cfg.train.seed = seed;
      cfg.split.seed = seed;
      cfg.split.train_fraction = train_fraction;
      cfg.split.granularity = kSplitNames.at(split_mode);
      cfg.per_subject = per_subject;
      cfg.jobs = cmp_flags.jobs;

      const auto recs = cmp_flags.load();
      CurveData curve;
      if (cmp_sweep) {
        curve = curve_from_reports(compare_sets(recs, sets, cfg));
      } else {
        curve.evaluated = compare_sets(recs, sets, cfg);
      }
      const auto& table = curve.evaluated;
      out << format_table(table);
      if (!report_csv.empty()) write_text(report_csv, comparison_csv(table));
      if (!report_json.empty()) write_text(report_json, to_json(table).dump(2) + "\n");
      if (!bars_path.empty()) write_text(bars_path, bars_csv(table));
      if (!history_path.empty()) write_text(history_path, history_csv(table));
      if (!curve_path.empty()) {
        if (!cmp_sweep) throw UsageError("--curve requires --sweep");
        write_text(curve_path, curve_csv(curve));
      }
      if (cmp_sweep) out << "\n" << curve_csv(curve);
      return kExitOk;
    }

    if (*train_cmd) {
      const FeatureSet fs = load_features(train_features);
      std::vector<std::string> electrodes;
      for (std::size_t c = 0; c < fs.n_cols(); c += kBands.size()) {
        electrodes.push_back(fs.columns[c].substr(0, fs.columns[c].find('_')));
      }
      ElectrodeSet set = custom_set(electrodes, fs.electrode_set_id);
      HarnessConfig cfg;
      const std::uint64_t seed = resolve_seed(train_seed, 42);
      cfg.network.seed = seed;
      cfg.train.seed = seed;
      cfg.train.epochs = train_epochs;
      cfg.split.seed = seed;
      auto result = run_features(fs, set, cfg);
      save_model(train_model, result.network);
      out << format_table(ComparisonTable{{result.report}});
      return kExitOk;
    }

    if (*sets_cmd) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& s : parse_selector(sets_select)) arr.push_back(to_json(s));
      out << arr.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MontageError& e) {
    err << "unknown electrode '" << e.electrode() << "': " << e.what() << "\n";
    return kExitUsage;
  } catch (const SetIdError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const LobeError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace neurobands::cli
