#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "eegdn/data/matrix.hpp"
#include "eegdn/data/pipeline.hpp"
#include "eegdn/data/synth.hpp"
#include "eegdn/error.hpp"
#include "eegdn/gradcheck_suite.hpp"
#include "eegdn/keyvalue.hpp"
#include "eegdn/report/metrics_report.hpp"
#include "eegdn/train/trainer.hpp"
#include "eegdn/zoo/builders.hpp"
#include "eegdn/zoo/checkpoint.hpp"

namespace eegdn::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

// Every run writes its effective configuration next to each artifact (`<artifact>.meta` or
// inside the checkpoint) so reruns can be compared byte for byte.

struct SynthDataOptions {
  std::size_t n_eeg = 0;
  std::size_t n_emg = 0;
  std::size_t length = signal::kDefaultEpochLength;
  double sample_rate = signal::kDefaultSampleRate;
  std::uint64_t seed = 0;
  fs::path out;

  KeyValues effective() const {
    KeyValues kv;
    kv.set("command", "synth-data");
    kv.set("n_eeg", static_cast<unsigned long long>(n_eeg));
    kv.set("n_emg", static_cast<unsigned long long>(n_emg));
    kv.set("length", static_cast<unsigned long long>(length));
    kv.set("sample_rate", sample_rate);
    kv.set("seed", static_cast<unsigned long long>(seed));
    return kv;
  }
};

struct TrainOptions {
  fs::path data;
  fs::path out;
  std::string arch = "novel-cnn";
  double width_scale = 1.0;
  std::size_t fcnn_hidden_layers = 3;
  std::size_t fcnn_hidden_width = 1024;
  std::size_t epochs = 50;
  std::size_t batch_size = 40;
  double lr = 5e-5;
  double decay = 0.9;
  double epsilon = 1e-7;
  std::uint64_t seed = 0;
  std::size_t remix = 10;
  std::optional<double> snr_min;
  std::optional<double> snr_max;

  KeyValues effective(double smin, double smax) const {
    KeyValues kv;
    kv.set("command", "train");
    kv.set("arch", arch);
    kv.set("width_scale", width_scale);
    if (arch == "fcnn") {
      kv.set("fcnn_hidden_layers", static_cast<unsigned long long>(fcnn_hidden_layers));
      kv.set("fcnn_hidden_width", static_cast<unsigned long long>(fcnn_hidden_width));
    }
    kv.set("epochs", static_cast<unsigned long long>(epochs));
    kv.set("batch_size", static_cast<unsigned long long>(batch_size));
    kv.set("lr", lr);
    kv.set("decay", decay);
    kv.set("epsilon", epsilon);
    kv.set("seed", static_cast<unsigned long long>(seed));
    kv.set("remix", static_cast<unsigned long long>(remix));
    kv.set("snr_min", smin);
    kv.set("snr_max", smax);
    kv.set("init", "uniform_fan_in(sqrt(6/fan_in))");
    return kv;
  }
};

struct EvaluateOptions {
  fs::path checkpoint;
  fs::path testset;
  fs::path out;
};

struct DenoiseOptions {
  fs::path checkpoint;
  fs::path in;
  fs::path out;
};

struct GradcheckOptions {
  GradcheckSuiteOptions suite;
  bool verbose = false;
};

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

inline void write_meta(const fs::path& artifact, const KeyValues& kv) {
  data::write_text(fs::path(artifact.string() + ".meta"), kv.to_text());
}

// ---------------------------------------------------------------------------

/// Writes <out>/eeg.ednb, <out>/emg.ednb and <out>/manifest.txt.
inline int cmd_synth_data(const SynthDataOptions& o, std::ostream& log) {
  if (o.n_eeg == 0 || o.n_emg == 0) throw UsageError("synth-data: --n-eeg and --n-emg must be >= 1");
  if (o.length < 2) throw UsageError("synth-data: --length must be >= 2");
  data::SynthOptions so;
  so.length = o.length;
  so.sample_rate = o.sample_rate;
  const auto corpus = data::synth_corpus(o.n_eeg, o.n_emg, o.seed, so);
  ensure_dir(o.out);
  data::save_matrix(corpus.eeg, o.out / "eeg.ednb", data::MatrixFormat::ednb);
  data::save_matrix(corpus.emg, o.out / "emg.ednb", data::MatrixFormat::ednb);
  KeyValues m = o.effective();
  m.set("kind", "corpus");
  m.set("generator", "synth");
  m.set("eeg", "eeg.ednb");
  m.set("emg", "emg.ednb");
  m.set("snr_min", -7.0);
  m.set("snr_max", 2.0);
  data::write_text(o.out / "manifest.txt", m.to_text());
  log << "synth-data: wrote " << o.n_eeg << " EEG and " << o.n_emg << " EMG epochs to " << o.out.string() << "\n";
  return kOk;
}

struct LoadedCorpus {
  data::EpochMatrix eeg;
  data::EpochMatrix emg;
  KeyValues manifest;
};

/// Reads a corpus manifest (a directory containing manifest.txt, or the manifest file itself).
inline LoadedCorpus load_corpus(const fs::path& where) {
  const fs::path manifest_path = fs::is_directory(where) ? where / "manifest.txt" : where;
  const fs::path dir = manifest_path.parent_path();
  LoadedCorpus c;
  c.manifest = KeyValues::parse(data::read_text(manifest_path));
  c.eeg = data::load_matrix(dir / c.manifest.require("eeg"));
  c.emg = data::load_matrix(dir / c.manifest.require("emg"));
  if (c.eeg.cols() != c.emg.cols()) {
    throw ConfigError("manifest field 'length': EEG epochs have " + std::to_string(c.eeg.cols()) + " samples, EMG " +
                      std::to_string(c.emg.cols()));
  }
  if (c.manifest.contains("length") && c.manifest.require_uint("length") != c.eeg.cols()) {
    throw ConfigError("manifest field 'length' (" + c.manifest.require("length") + ") does not match epoch length " +
                      std::to_string(c.eeg.cols()));
  }
  if (c.manifest.contains("n_eeg") && c.manifest.require_uint("n_eeg") != c.eeg.rows()) {
    throw ConfigError("manifest field 'n_eeg' does not match the EEG matrix row count");
  }
  if (c.manifest.contains("n_emg") && c.manifest.require_uint("n_emg") != c.emg.rows()) {
    throw ConfigError("manifest field 'n_emg' does not match the EMG matrix row count");
  }
  return c;
}

inline zoo::ModelGraph build_model(const TrainOptions& o, std::size_t input_len) {
  if (o.arch == "novel-cnn") return zoo::build_novel_cnn(input_len, o.width_scale);
  if (o.arch == "fcnn") return zoo::build_fcnn_baseline(input_len, o.fcnn_hidden_layers, o.fcnn_hidden_width);
  throw UsageError("train: unknown --arch '" + o.arch + "' (novel-cnn | fcnn)");
}

/// Split, remix, train; writes model.ednc, loss.csv (+ .meta) and testset/.
inline int cmd_train(const TrainOptions& o, std::ostream& log) {
  const auto corpus = load_corpus(o.data);
  const double smin = o.snr_min.value_or(corpus.manifest.contains("snr_min") ? corpus.manifest.require_double("snr_min") : -7.0);
  const double smax = o.snr_max.value_or(corpus.manifest.contains("snr_max") ? corpus.manifest.require_double("snr_max") : 2.0);
  if (!(smin <= smax)) throw ConfigError("train: snr_min must not exceed snr_max");
  if (o.remix == 0) throw ConfigError("train: --remix must be >= 1");

  const auto pairs = data::equalize_and_pair(corpus.eeg, corpus.emg, derive_seed(o.seed, 10));
  const auto splits = data::split_pairs(pairs, derive_seed(o.seed, 11));
  const auto train_set = data::build_training_set(corpus.eeg, corpus.emg, splits.train, o.remix, smin, smax,
                                                  derive_seed(o.seed, 12));
  const auto val_set = data::build_eval_set(corpus.eeg, corpus.emg, splits.validation);
  const auto test_set = data::build_eval_set(corpus.eeg, corpus.emg, splits.test);
  log << "train: " << pairs.size() << " pairs -> " << splits.train.size() << "/" << splits.validation.size() << "/"
      << splits.test.size() << " (train/val/test); " << train_set.size() << " training examples, " << val_set.size()
      << " validation, " << test_set.size() << " test\n";
  if (train_set.skipped + val_set.skipped + test_set.skipped > 0) {
    log << "train: warning: skipped " << (train_set.skipped + val_set.skipped + test_set.skipped)
        << " degenerate mixtures\n";
  }

  auto model = build_model(o, corpus.eeg.cols());
  zoo::init_params(model, derive_seed(o.seed, 13));
  log << "train: " << model.arch << " with " << model.net.parameter_count() << " parameters\n";

  train::TrainConfig tc;
  tc.epochs = o.epochs;
  tc.batch_size = o.batch_size;
  tc.learning_rate = o.lr;
  tc.decay = o.decay;
  tc.epsilon = o.epsilon;
  tc.seed = derive_seed(o.seed, 14);
  const auto curve = train::train(model.net, train_set, val_set, tc, [&](std::size_t e, double tl, double vl) {
    log << "epoch " << e << "/" << o.epochs << "  train_loss=" << tl << "  val_loss=" << vl << "\n";
  });

  KeyValues eff = o.effective(smin, smax);
  const std::string hash = hex64(fnv1a64(eff.to_text()));
  KeyValues meta = eff;
  meta.set("config_hash", hash);
  meta.set("epoch", static_cast<unsigned long long>(o.epochs));

  ensure_dir(o.out);
  zoo::save_checkpoint(model, meta, o.out / "model.ednc");
  data::write_text(o.out / "loss.csv", curve.to_csv());
  write_meta(o.out / "loss.csv", meta);
  KeyValues test_manifest = eff;
  test_manifest.set("config_hash", hash);
  test_manifest.set("split", "test");
  test_manifest.set("sample_rate", corpus.manifest.get("sample_rate").value_or(KeyValues::format_double(signal::kDefaultSampleRate)));
  data::save_eval_bundle(test_set, test_manifest, o.out / "testset");
  log << "train: wrote " << (o.out / "model.ednc").string() << ", loss.csv, testset/\n";
  return kOk;
}

inline report::Denoiser model_denoiser(const engine::Sequential& net) {
  return [&net](std::size_t, std::span<const double> y) { return train::denoise(net, y); };
}

/// Per-SNR metrics of the checkpoint on an evaluation bundle, with the noisy-input baseline.
inline int cmd_evaluate(const EvaluateOptions& o, std::ostream& log) {
  const auto ck = zoo::load_checkpoint(o.checkpoint);
  const auto set = data::load_eval_bundle(o.testset);
  if (set.noisy.cols() != ck.model.net.input_shape().length) {
    throw ShapeError("evaluate: test epochs have " + std::to_string(set.noisy.cols()) + " samples, model expects " +
                     std::to_string(ck.model.net.input_shape().length));
  }
  const double fs_hz = set.manifest.contains("sample_rate") ? set.manifest.require_double("sample_rate")
                                                            : signal::kDefaultSampleRate;
  auto rep = report::evaluate(set, model_denoiser(ck.model.net), fs_hz);
  const auto ck_bytes = data::read_bytes(o.checkpoint);
  rep.metadata.set("command", "evaluate");
  rep.metadata.set("model_id", hex64(fnv1a64(std::string_view(reinterpret_cast<const char*>(ck_bytes.data()), ck_bytes.size()))));
  rep.metadata.set("config_hash", ck.metadata.get("config_hash").value_or("unknown"));
  rep.metadata.set("seed", ck.metadata.get("seed").value_or("unknown"));
  rep.metadata.set("arch", ck.model.arch);
  rep.metadata.set("examples", static_cast<unsigned long long>(rep.count));
  if (!o.out.empty()) {
    if (o.out.has_parent_path()) ensure_dir(o.out.parent_path());
    data::write_text(o.out, rep.to_csv());
    write_meta(o.out, rep.metadata);
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "evaluate: %zu examples  RRMSE_t=%.4f  RRMSE_f=%.4f  CC=%.4f  (noisy: %.4f %.4f %.4f)\n",
                rep.count, rep.overall_model.rrmse_t.mean, rep.overall_model.rrmse_f.mean, rep.overall_model.cc.mean,
                rep.overall_noisy.rrmse_t.mean, rep.overall_noisy.rrmse_f.mean, rep.overall_noisy.cc.mean);
  log << buf;
  return kOk;
}

/// Row-wise denoise of a matrix file; output has the input's shape.
inline int cmd_denoise(const DenoiseOptions& o, std::ostream& log) {
  const auto ck = zoo::load_checkpoint(o.checkpoint);
  const auto in = data::load_matrix(o.in);
  const std::size_t len = ck.model.net.input_shape().length;
  if (in.cols() != len) {
    throw ShapeError("denoise: input has " + std::to_string(in.cols()) + " columns, model expects " + std::to_string(len));
  }
  data::EpochMatrix out(0, len);
  for (std::size_t r = 0; r < in.rows(); ++r) {
    try {
      out.append_row(train::denoise(ck.model.net, in.row(r)));
    } catch (const ConstantSignalError&) {
      throw ConstantSignalError("denoise: row " + std::to_string(r) + " is constant (zero standard deviation)");
    }
  }
  if (o.out.has_parent_path()) ensure_dir(o.out.parent_path());
  data::save_matrix(out, o.out);
  log << "denoise: wrote " << out.rows() << "x" << out.cols() << " to " << o.out.string() << "\n";
  return kOk;
}

/// Exit 0 when every case passes, kNumeric otherwise.
inline int cmd_gradcheck(const GradcheckOptions& o, std::ostream& log) {
  const auto res = run_gradcheck_suite(o.suite, [&](const SuiteCase& c) {
    if (!o.verbose && c.report.passed) return;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s seed=%llu %-10s max_rel_error=%.3e\n", c.report.passed ? "ok  " : "FAIL",
                  static_cast<unsigned long long>(c.seed), c.name.c_str(), c.report.max_rel_error);
    log << buf;
    if (!c.report.passed || o.verbose) {
      for (const auto& g : c.report.groups) {
        std::snprintf(buf, sizeof buf, "      %-16s checked=%zu kinks=%zu max_rel_error=%.3e\n", g.name.c_str(),
                      g.checked, g.skipped_kinks, g.max_rel_error);
        log << buf;
      }
    }
  });
  char buf[160];
  std::snprintf(buf, sizeof buf, "gradcheck: %zu cases, max relative error %.3e, tolerance %.1e: %s\n",
                res.cases.size(), res.max_rel_error, o.suite.tolerance, res.passed ? "PASS" : "FAIL");
  log << buf;
  return res.passed ? kOk : kNumeric;
}

}  // namespace eegdn::cli
