#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "eegdn/data/matrix.hpp"
#include "eegdn/error.hpp"
#include "eegdn/keyvalue.hpp"
#include "eegdn/random.hpp"
#include "eegdn/signal/metrics.hpp"

namespace eegdn::data {

struct IndexPair {
  std::size_t eeg = 0;
  std::size_t emg = 0;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Pads the EEG index list up to the EMG count by reuse and pairs it 1:1 with a shuffle of
/// all EMG indices. Every EEG epoch is used at least once; reuse draws from a shuffled pool
/// without replacement, refilling the pool only once it is exhausted.
inline std::vector<IndexPair> equalize_and_pair(std::size_t eeg_count, std::size_t emg_count, std::uint64_t seed) {
  if (eeg_count == 0 || emg_count == 0) throw LengthError("equalize_and_pair: empty input");
  if (emg_count < eeg_count) {
    throw LengthError("equalize_and_pair: need at least as many EMG epochs (" + std::to_string(emg_count) +
                      ") as EEG epochs (" + std::to_string(eeg_count) + ")");
  }
  Rng rng(seed);
  std::vector<std::size_t> eeg(eeg_count);
  std::iota(eeg.begin(), eeg.end(), std::size_t{0});
  std::vector<std::size_t> pool;
  while (eeg.size() < emg_count) {
    if (pool.empty()) {
      pool.resize(eeg_count);
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      shuffle(pool, rng);
    }
    eeg.push_back(pool.back());
    pool.pop_back();
  }
  std::vector<std::size_t> emg(emg_count);
  std::iota(emg.begin(), emg.end(), std::size_t{0});
  shuffle(emg, rng);

  std::vector<IndexPair> pairs(emg_count);
  for (std::size_t i = 0; i < emg_count; ++i) pairs[i] = {eeg[i], emg[i]};
  return pairs;
}

inline std::vector<IndexPair> equalize_and_pair(const EpochMatrix& eeg, const EpochMatrix& emg, std::uint64_t seed) {
  if (eeg.rows() > 0 && emg.rows() > 0 && eeg.cols() != emg.cols()) {
    throw ShapeError("equalize_and_pair: EEG epochs have " + std::to_string(eeg.cols()) + " samples, EMG " +
                     std::to_string(emg.cols()));
  }
  return equalize_and_pair(eeg.rows(), emg.rows(), seed);
}

struct Splits {
  std::vector<IndexPair> train;
  std::vector<IndexPair> validation;
  std::vector<IndexPair> test;
};

/// Seeded shuffle, then contiguous train | validation | test slices. Validation and test each
/// take one tenth of the pairs rounded to nearest (5598 -> 560), training gets the rest.
inline Splits split_pairs(std::vector<IndexPair> pairs, std::uint64_t seed) {
  if (pairs.size() < 10) throw LengthError("split_pairs: need at least 10 pairs, got " + std::to_string(pairs.size()));
  Rng rng(seed);
  shuffle(pairs, rng);
  const std::size_t part = (pairs.size() + 5) / 10;
  const std::size_t n_train = pairs.size() - 2 * part;
  Splits s;
  s.train.assign(pairs.begin(), pairs.begin() + n_train);
  s.validation.assign(pairs.begin() + n_train, pairs.begin() + n_train + part);
  s.test.assign(pairs.begin() + n_train + part, pairs.end());
  return s;
}

/// One normalized training/evaluation example. The raw mixture is y = sigma_y * y_hat,
/// the raw clean epoch x = sigma_y * x_hat, and y = x + lambda * emg[emg_index].
struct MixedExample {
  signal::Samples y_hat;
  signal::Samples x_hat;
  double sigma_y = 0.0;
  double snr_db = 0.0;
  double lambda = 0.0;
  std::size_t eeg_index = 0;
  std::size_t emg_index = 0;
};

struct MixedDataset {
  std::vector<MixedExample> examples;
  /// Pairs dropped because the artifact had zero RMS or the mixture was constant.
  std::size_t skipped = 0;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
};

namespace detail {

inline bool try_mix(const EpochMatrix& eeg, const EpochMatrix& emg, const IndexPair& p, double snr_db,
                    MixedDataset& out) {
  const auto x = eeg.row(p.eeg);
  const auto n = emg.row(p.emg);
  if (signal::rms(n) == 0.0) {
    ++out.skipped;
    return false;
  }
  auto m = signal::mix(x, n, snr_db);
  try {
    auto norm = signal::normalize_pair(m.y, x);
    out.examples.push_back({std::move(norm.y_hat), std::move(norm.x_hat), norm.sigma_y, snr_db, m.lambda, p.eeg, p.emg});
  } catch (const ConstantSignalError&) {
    ++out.skipped;
    return false;
  }
  return true;
}

inline void check_sources(const EpochMatrix& eeg, const EpochMatrix& emg, std::span<const IndexPair> pairs) {
  if (eeg.cols() != emg.cols()) throw ShapeError("dataset: EEG and EMG epoch lengths differ");
  for (const auto& p : pairs) {
    if (p.eeg >= eeg.rows() || p.emg >= emg.rows()) throw LengthError("dataset: pair index out of range");
  }
}

}  // namespace detail

/// Mixes every pair `remix_count` times with SNR drawn uniformly from [snr_min, snr_max) dB.
/// Example order is round-major: all pairs for round 0, then round 1, ...
inline MixedDataset build_training_set(const EpochMatrix& eeg, const EpochMatrix& emg, std::span<const IndexPair> pairs,
                                       std::size_t remix_count, double snr_min, double snr_max, std::uint64_t seed) {
  detail::check_sources(eeg, emg, pairs);
  if (!(snr_min <= snr_max)) throw ConfigError("build_training_set: snr_min must not exceed snr_max");
  Rng rng(seed);
  MixedDataset ds;
  ds.examples.reserve(pairs.size() * remix_count);
  for (std::size_t r = 0; r < remix_count; ++r) {
    for (const auto& p : pairs) {
      const double snr = uniform(rng, snr_min, snr_max);
      detail::try_mix(eeg, emg, p, snr, ds);
    }
  }
  return ds;
}

/// Integer SNR levels used for validation/test expansion: -7, -6, ..., 2 dB.
inline std::vector<double> default_eval_levels() {
  std::vector<double> v;
  for (int s = -7; s <= 2; ++s) v.push_back(s);
  return v;
}

/// Mixes every pair once at each level; pair-major order.
inline MixedDataset build_eval_set(const EpochMatrix& eeg, const EpochMatrix& emg, std::span<const IndexPair> pairs,
                                   std::span<const double> levels) {
  detail::check_sources(eeg, emg, pairs);
  MixedDataset ds;
  ds.examples.reserve(pairs.size() * levels.size());
  for (const auto& p : pairs) {
    for (double level : levels) detail::try_mix(eeg, emg, p, level, ds);
  }
  return ds;
}

inline MixedDataset build_eval_set(const EpochMatrix& eeg, const EpochMatrix& emg, std::span<const IndexPair> pairs) {
  const auto levels = default_eval_levels();
  return build_eval_set(eeg, emg, pairs, levels);
}

// ---------------------------------------------------------------------------
// Evaluation bundle on disk: a directory holding
//   noisy.ednb   raw mixtures y (one row per example)
//   clean.ednb   raw clean epochs x
//   meta.csv     index,snr_db,lambda,sigma_y,eeg_index,emg_index
//   manifest.txt key=value description

struct LabeledSet {
  EpochMatrix noisy;
  EpochMatrix clean;
  std::vector<double> snr_db;
  KeyValues manifest;
};

inline LabeledSet to_labeled(const MixedDataset& ds) {
  LabeledSet out;
  for (const auto& ex : ds.examples) {
    std::vector<double> y(ex.y_hat.size()), x(ex.x_hat.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = ex.sigma_y * ex.y_hat[i];
      x[i] = ex.sigma_y * ex.x_hat[i];
    }
    out.noisy.append_row(y);
    out.clean.append_row(x);
    out.snr_db.push_back(ex.snr_db);
  }
  return out;
}

inline void save_eval_bundle(const MixedDataset& ds, const KeyValues& manifest, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  const LabeledSet ls = to_labeled(ds);
  save_matrix(ls.noisy, dir / "noisy.ednb", MatrixFormat::ednb);
  save_matrix(ls.clean, dir / "clean.ednb", MatrixFormat::ednb);
  std::string meta = "index,snr_db,lambda,sigma_y,eeg_index,emg_index\n";
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const auto& ex = ds.examples[i];
    meta += std::to_string(i) + "," + KeyValues::format_double(ex.snr_db) + "," + KeyValues::format_double(ex.lambda) +
            "," + KeyValues::format_double(ex.sigma_y) + "," + std::to_string(ex.eeg_index) + "," +
            std::to_string(ex.emg_index) + "\n";
  }
  write_text(dir / "meta.csv", meta);
  KeyValues m = manifest;
  m.set("kind", "eval_set");
  m.set("noisy", "noisy.ednb");
  m.set("clean", "clean.ednb");
  m.set("meta", "meta.csv");
  m.set("count", static_cast<unsigned long long>(ds.examples.size()));
  m.set("skipped", static_cast<unsigned long long>(ds.skipped));
  write_text(dir / "manifest.txt", m.to_text());
}

inline LabeledSet load_eval_bundle(const std::filesystem::path& dir) {
  LabeledSet ls;
  ls.manifest = KeyValues::parse(read_text(dir / "manifest.txt"));
  ls.noisy = load_matrix(dir / ls.manifest.get("noisy").value_or("noisy.ednb"), MatrixFormat::ednb);
  ls.clean = load_matrix(dir / ls.manifest.get("clean").value_or("clean.ednb"), MatrixFormat::ednb);
  if (ls.noisy.rows() != ls.clean.rows() || ls.noisy.cols() != ls.clean.cols()) {
    throw FormatError("eval bundle: noisy and clean matrices differ in shape");
  }
  const EpochMatrix meta = [&] {
    std::string text = read_text(dir / ls.manifest.get("meta").value_or("meta.csv"));
    const auto nl = text.find('\n');
    if (nl == std::string::npos) throw FormatError("eval bundle: meta.csv has no header");
    return parse_csv(text.substr(nl + 1));
  }();
  if (meta.rows() != ls.noisy.rows() || (meta.rows() > 0 && meta.cols() != 6)) {
    throw FormatError("eval bundle: meta.csv has " + std::to_string(meta.rows()) + " rows, expected " +
                      std::to_string(ls.noisy.rows()));
  }
  for (std::size_t r = 0; r < meta.rows(); ++r) ls.snr_db.push_back(meta.row(r)[1]);
  return ls;
}

}  // namespace eegdn::data
