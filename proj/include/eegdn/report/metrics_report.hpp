#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "eegdn/data/pipeline.hpp"
#include "eegdn/error.hpp"
#include "eegdn/keyvalue.hpp"
#include "eegdn/signal/metrics.hpp"

namespace eegdn::report {

/// Mean and population standard deviation.
struct Stat {
  double mean = 0.0;
  double std = 0.0;
};

inline Stat summarize(std::span<const double> v) {
  if (v.empty()) return {};
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return {m, std::sqrt(s / static_cast<double>(v.size()))};
}

struct MetricSet {
  Stat rrmse_t;
  Stat rrmse_f;
  Stat cc;
};

struct LevelMetrics {
  int snr_db = 0;
  std::size_t count = 0;
  MetricSet model;
  MetricSet noisy;
};

struct MetricsReport {
  std::vector<LevelMetrics> levels;  // ascending SNR
  MetricSet overall_model;
  MetricSet overall_noisy;
  std::size_t count = 0;
  KeyValues metadata;

  const LevelMetrics* level(int snr_db) const {
    for (const auto& l : levels) {
      if (l.snr_db == snr_db) return &l;
    }
    return nullptr;
  }

  /// Columns: source,snr_db,count,<metric>_mean,<metric>_std for rrmse_t, rrmse_f, cc.
  /// Rows for source "model" and "noisy" per level, then snr_db "all" for the averages.
  std::string to_csv() const {
    std::string out = "source,snr_db,count,rrmse_t_mean,rrmse_t_std,rrmse_f_mean,rrmse_f_std,cc_mean,cc_std\n";
    const auto row = [&](const char* source, const std::string& level, std::size_t n, const MetricSet& m) {
      char buf[320];
      std::snprintf(buf, sizeof buf, "%s,%s,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", source, level.c_str(), n,
                    m.rrmse_t.mean, m.rrmse_t.std, m.rrmse_f.mean, m.rrmse_f.std, m.cc.mean, m.cc.std);
      out += buf;
    };
    for (const auto& l : levels) row("model", std::to_string(l.snr_db), l.count, l.model);
    for (const auto& l : levels) row("noisy", std::to_string(l.snr_db), l.count, l.noisy);
    row("model", "all", count, overall_model);
    row("noisy", "all", count, overall_noisy);
    return out;
  }
};

/// Maps (example index, raw noisy epoch) to a raw denoised epoch.
using Denoiser = std::function<signal::Samples(std::size_t, std::span<const double>)>;

/// Denoises every example and scores output and raw input against the clean epoch.
/// Examples are grouped by SNR rounded to the nearest integer dB; metrics are computed per
/// epoch and averaged.
inline MetricsReport evaluate(const data::LabeledSet& set, const Denoiser& denoiser,
                              double sample_rate = signal::kDefaultSampleRate) {
  if (set.noisy.rows() == 0) throw LengthError("evaluate: empty test set");
  struct Acc {
    std::vector<double> t, f, c, nt, nf, nc;
  };
  std::map<int, Acc> by_level;
  Acc all;
  for (std::size_t i = 0; i < set.noisy.rows(); ++i) {
    const auto y = set.noisy.row(i);
    const auto x = set.clean.row(i);
    const auto out = denoiser(i, y);
    if (out.size() != x.size()) {
      throw ShapeError("evaluate: denoiser returned " + std::to_string(out.size()) + " samples for example " +
                       std::to_string(i));
    }
    const int level = static_cast<int>(std::lround(set.snr_db.at(i)));
    auto& acc = by_level[level];
    const double t = signal::rrmse_t(out, x), f = signal::rrmse_f(out, x, sample_rate), c = signal::cc(out, x);
    const double nt = signal::rrmse_t(y, x), nf = signal::rrmse_f(y, x, sample_rate), nc = signal::cc(y, x);
    for (Acc* a : {&acc, &all}) {
      a->t.push_back(t);
      a->f.push_back(f);
      a->c.push_back(c);
      a->nt.push_back(nt);
      a->nf.push_back(nf);
      a->nc.push_back(nc);
    }
  }
  MetricsReport r;
  for (const auto& [level, a] : by_level) {
    r.levels.push_back({level, a.t.size(), {summarize(a.t), summarize(a.f), summarize(a.c)},
                        {summarize(a.nt), summarize(a.nf), summarize(a.nc)}});
  }
  r.count = all.t.size();
  r.overall_model = {summarize(all.t), summarize(all.f), summarize(all.c)};
  r.overall_noisy = {summarize(all.nt), summarize(all.nf), summarize(all.nc)};
  return r;
}

}  // namespace eegdn::report
