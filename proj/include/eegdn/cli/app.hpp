#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eegdn/cli/commands.hpp"
#include "eegdn/data/matrix.hpp"
#include "eegdn/error.hpp"
#include "eegdn/keyvalue.hpp"

namespace eegdn::cli {

namespace detail {

/// Finds `--config <path>` / `--config=<path>` among subcommand arguments.
inline std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

/// Config-file entries become `--key=value` arguments placed before the user's own flags;
/// with last-wins option policy that yields flag > config file > default.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  if (args.size() < 2) return args;
  const std::vector<std::string> rest(args.begin() + 2, args.end());
  const auto path = find_config(rest);
  if (!path) return args;
  KeyValues kv;
  try {
    kv = KeyValues::parse(data::read_text(*path));
  } catch (const IoError& e) {
    throw ConfigError(std::string("--config: ") + e.what());
  }
  std::vector<std::string> out(args.begin(), args.begin() + 2);
  for (const auto& [k, v] : kv.entries()) {
    if (k == "config") throw ConfigError("config file may not set 'config'");
    std::string key = k;
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    out.push_back("--" + key + "=" + v);
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace detail

/// Parses `args` (args[0] is the program name) and runs one subcommand.
/// Exit codes: 0 success, 1 usage/config, 2 data/format, 3 numeric failure.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"EEG muscle-artifact removal with a 1-D convolutional denoiser", "eegdn"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;

  SynthDataOptions synth;
  auto* s = app.add_subcommand("synth-data", "Generate a synthetic EEG/EMG corpus (EDNB + manifest)");
  s->add_option("--n-eeg", synth.n_eeg, "Number of EEG epochs")->required();
  s->add_option("--n-emg", synth.n_emg, "Number of EMG epochs")->required();
  s->add_option("--length", synth.length, "Samples per epoch");
  s->add_option("--sample-rate", synth.sample_rate, "Sampling rate in Hz");
  s->add_option("--seed", synth.seed, "Random seed");
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--config", config_path, "key=value config file");

  TrainOptions tr;
  double snr_min = 0.0, snr_max = 0.0;
  auto* t = app.add_subcommand("train", "Build the remixed datasets and train a model");
  t->add_option("--data", tr.data, "Corpus directory or manifest file")->required();
  t->add_option("--out", tr.out, "Output directory")->required();
  t->add_option("--arch", tr.arch, "novel-cnn | fcnn");
  t->add_option("--width-scale", tr.width_scale, "Channel multiplier for the Novel CNN (1 = full size)");
  t->add_option("--fcnn-hidden-layers", tr.fcnn_hidden_layers, "Hidden layers of the fcnn baseline");
  t->add_option("--fcnn-hidden-width", tr.fcnn_hidden_width, "Hidden width of the fcnn baseline");
  t->add_option("--epochs", tr.epochs, "Training epochs");
  t->add_option("--batch-size", tr.batch_size, "Mini-batch size");
  t->add_option("--lr", tr.lr, "RMSprop learning rate");
  t->add_option("--decay", tr.decay, "RMSprop decay (beta)");
  t->add_option("--epsilon", tr.epsilon, "RMSprop epsilon");
  t->add_option("--seed", tr.seed, "Random seed");
  t->add_option("--remix", tr.remix, "Times each training pair is remixed");
  auto* smin_opt = t->add_option("--snr-min", snr_min, "Lower SNR bound in dB (default from manifest, else -7)");
  auto* smax_opt = t->add_option("--snr-max", snr_max, "Upper SNR bound in dB (default from manifest, else 2)");
  t->add_option("--config", config_path, "key=value config file");

  EvaluateOptions ev;
  auto* e = app.add_subcommand("evaluate", "Per-SNR RRMSE_t / RRMSE_f / CC report for a checkpoint");
  e->add_option("--checkpoint", ev.checkpoint, "Checkpoint file")->required();
  e->add_option("--testset", ev.testset, "Evaluation bundle directory")->required();
  e->add_option("--out", ev.out, "Report CSV path");
  e->add_option("--config", config_path, "key=value config file");

  DenoiseOptions dn;
  auto* d = app.add_subcommand("denoise", "Denoise every row of an EDNB or CSV matrix");
  d->add_option("--checkpoint", dn.checkpoint, "Checkpoint file")->required();
  d->add_option("--in", dn.in, "Input matrix (.ednb or .csv)")->required();
  d->add_option("--out", dn.out, "Output matrix (.ednb or .csv)")->required();
  d->add_option("--config", config_path, "key=value config file");

  GradcheckOptions gc;
  auto* g = app.add_subcommand("gradcheck", "Finite-difference check of every backward pass");
  g->add_option("--tolerance", gc.suite.tolerance, "Maximum relative error");
  g->add_option("--seeds", gc.suite.seeds, "Number of random instances");
  g->add_option("--seed", gc.suite.base_seed, "First seed");
  g->add_option("--step", gc.suite.step, "Central-difference step");
  g->add_option("--max-coords", gc.suite.max_coords_per_group, "Coordinates sampled per parameter tensor");
  g->add_option("--input-length", gc.suite.novel_cnn_input_length, "Input length of the scaled Novel CNN");
  g->add_option("--width-scale", gc.suite.novel_cnn_width_scale, "Width scale of the scaled Novel CNN");
  g->add_flag("--corrupt-backward", gc.suite.corrupt_backward, "Negative control: corrupt one backward pass");
  g->add_flag("--verbose", gc.verbose, "Print every case");
  g->add_option("--config", config_path, "key=value config file");

  try {
    args = detail::expand_config(std::move(args));
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& ex) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& ex) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kUsage;
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << "\n";
    return kUsage;
  } catch (const DataError& ex) {
    err << "config error: " << ex.what() << "\n";
    return kUsage;
  }

  try {
    if (*s) return cmd_synth_data(synth, out);
    if (*t) {
      if (smin_opt->count() > 0) tr.snr_min = snr_min;
      if (smax_opt->count() > 0) tr.snr_max = snr_max;
      return cmd_train(tr, out);
    }
    if (*e) return cmd_evaluate(ev, out);
    if (*d) return cmd_denoise(dn, out);
    if (*g) return cmd_gradcheck(gc, out);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kUsage;
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << "\n";
    return kUsage;
  } catch (const DataError& ex) {
    err << "data error: " << ex.what() << "\n";
    return kData;
  } catch (const NumericError& ex) {
    err << "numeric error: " << ex.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}

inline int run_cli(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv, argv + argc));
}

}  // namespace eegdn::cli
