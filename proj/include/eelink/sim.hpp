#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "eelink/config.hpp"

namespace eelink {

// One Monte-Carlo outcome: the decision a scheme took for one realization.
struct TrialRecord {
  double snr_db = 0;
  int trial = 0;
  std::string scheme;
  int mcs = -1;
  int n_rx = 0;
  Detector detector = Detector::MMSE;
  bool dvfs = false;
  int m_frames = 0;
  bool outage = true;
  double eta_nj_per_bit = 0;
  double goodput_mbps = 0;
};

inline TrialRecord make_record(double snr_db, int trial, const std::string& label,
                               const RaDecision& d) {
  TrialRecord r;
  r.snr_db = snr_db;
  r.trial = trial;
  r.scheme = label;
  r.outage = d.outage;
  if (!d.outage) {
    r.mcs = d.chosen.mcs.index;
    r.n_rx = d.chosen.n_rx;
    r.detector = d.chosen.detector;
    r.dvfs = d.chosen.dvfs;
    r.m_frames = d.m_frames;
    r.eta_nj_per_bit = d.eta * 1e9;
    r.goodput_mbps = d.goodput / 1e6;
  }
  return r;
}

// Records of one sweep at a fixed maximum aggregation length.
struct RecordSet {
  int l_max_frames = 1;
  std::vector<TrialRecord> records;
};

inline ChannelRealization draw_channel(const SweepConfig& cfg, std::uint64_t trial,
                                       double snr_db) {
  if (cfg.channel.model == ChannelConfig::Model::Flat) return draw_flat(cfg.seed, trial, snr_db);
  return draw_selective(cfg.seed, trial, snr_db, cfg.channel.rms_delay_ns,
                        cfg.channel.n_subcarriers);
}

// Core Monte-Carlo driver. Evaluates the oracle once per realization and
// reuses it across schemes and aggregation lengths; one record set is
// produced per requested l_max value. Iteration order (snr, trial, scheme)
// fixes the output order regardless of internal evaluation strategy.
inline std::vector<RecordSet> sweep_record_sets(const SweepConfig& cfg,
                                                const std::vector<int>& l_values) {
  cfg.validate_config();
  const std::vector<SystemMode> full_set = build_mode_set(ModeSetKind::Full, cfg.mcs_table);

  EvalContext ctx;
  ctx.modes = full_set;
  ctx.lut = cfg.lut;
  ctx.timing = cfg.timing;
  ctx.gammas = cfg.gammas;
  ctx.base_frame_bits = cfg.base_frame_bits;

  auto in_set = [](const SystemMode& m, ModeSetKind kind) {
    switch (kind) {
      case ModeSetKind::Full: return true;
      case ModeSetKind::Baseline:
        return m.detector == Detector::MMSE && m.n_rx == 4 && !m.dvfs;
      default:
        return m.detector == Detector::MMSE && m.n_rx == 4;
    }
  };

  std::vector<RecordSet> sets;
  sets.reserve(l_values.size());
  for (int l : l_values) sets.push_back({l, {}});

  for (double snr : cfg.snr_grid) {
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const ChannelRealization ch = draw_channel(cfg, static_cast<std::uint64_t>(trial), snr);
      ModeOracle oracle(ch, cfg.gammas);

      // Annotations for every aggregation factor any record set needs.
      int m_needed = 1;
      for (int l : l_values) m_needed = std::max(m_needed, l);
      std::vector<std::vector<AnnotatedMode>> by_m(m_needed + 1);
      for (int m = 1; m <= m_needed; ++m) by_m[m] = annotate_feasible(ctx, oracle, m);

      for (RecordSet& set : sets) {
        for (const SchemeSpec& scheme : cfg.schemes) {
          std::vector<AnnotatedMode> candidates;
          for (int m = 1; m <= set.l_max_frames; ++m)
            for (const AnnotatedMode& a : by_m[m])
              if (in_set(a.mode, scheme.mode_set)) candidates.push_back(a);
          const RaDecision d = apply_scheme(scheme.policy, candidates, cfg.k);
          set.records.push_back(make_record(snr, trial, scheme.label, d));
        }
      }
    }
  }
  return sets;
}

inline std::vector<TrialRecord> run_sweep(const SweepConfig& cfg) {
  const int l = cfg.scenario == Scenario::Aggregation ? cfg.l_max_frames : 1;
  return sweep_record_sets(cfg, {l})[0].records;
}

// Record sets for every maximum length 1..l_max_frames, sharing the oracle
// work across the grid.
inline std::vector<RecordSet> run_surface(const SweepConfig& cfg) {
  std::vector<int> ls;
  for (int l = 1; l <= cfg.l_max_frames; ++l) ls.push_back(l);
  return sweep_record_sets(cfg, ls);
}

// ---- CSV ----------------------------------------------------------------

inline const char* csv_header() {
  return "snr_db,trial,scheme,mcs,n_rx,detector,dvfs,m_frames,outage,eta_nj_per_bit,goodput_mbps";
}

inline std::string format_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void write_csv_row(std::ostream& out, const TrialRecord& r) {
  out << format_g6(r.snr_db) << ',' << r.trial << ',' << r.scheme << ',';
  if (r.outage) {
    out << ",,,,,1,,0\n";
    return;
  }
  out << r.mcs << ',' << r.n_rx << ',' << to_string(r.detector) << ',' << (r.dvfs ? 1 : 0) << ','
      << r.m_frames << ",0," << format_g6(r.eta_nj_per_bit) << ',' << format_g6(r.goodput_mbps)
      << '\n';
}

inline void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << csv_header() << '\n';
  for (const TrialRecord& r : records) write_csv_row(out, r);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

inline std::vector<TrialRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  if (split_csv_line(line).size() != 11) throw std::runtime_error("csv: unexpected header");
  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 11) throw std::runtime_error("csv: bad field count");
    TrialRecord r;
    r.snr_db = std::stod(f[0]);
    r.trial = std::stoi(f[1]);
    r.scheme = f[2];
    r.outage = f[8] == "1";
    if (!r.outage) {
      r.mcs = std::stoi(f[3]);
      r.n_rx = std::stoi(f[4]);
      r.detector = f[5] == "lrald" ? Detector::LRALD : Detector::MMSE;
      r.dvfs = f[6] == "1";
      r.m_frames = std::stoi(f[7]);
      r.eta_nj_per_bit = std::stod(f[9]);
    }
    r.goodput_mbps = std::stod(f[10]);
    records.push_back(r);
  }
  return records;
}

// ---- Summaries ----------------------------------------------------------

struct ModeShare {
  int mcs = 0;
  Detector detector = Detector::MMSE;
  double share_pct = 0;
  double mean_eta_nj = 0;
  int count = 0;
};

// Distribution of selected (MCS, detector) pairs for one (snr, scheme)
// group, conditioned on non-outage trials.
inline std::vector<ModeShare> mode_distribution(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("mode_distribution: no records");
  for (const TrialRecord& r : records)
    if (r.snr_db != records.front().snr_db || r.scheme != records.front().scheme)
      throw std::invalid_argument("mode_distribution: records span multiple (snr, scheme) groups");
  std::map<std::pair<int, int>, std::pair<int, double>> acc;  // (det, mcs) -> (count, eta sum)
  int total = 0;
  for (const TrialRecord& r : records) {
    if (r.outage) continue;
    ++total;
    auto& slot = acc[{r.detector == Detector::MMSE ? 0 : 1, r.mcs}];
    slot.first += 1;
    slot.second += r.eta_nj_per_bit;
  }
  if (total == 0) throw std::invalid_argument("mode_distribution: all trials in outage");
  std::vector<ModeShare> out;
  for (const auto& [key, slot] : acc) {
    ModeShare s;
    s.detector = key.first == 0 ? Detector::MMSE : Detector::LRALD;
    s.mcs = key.second;
    s.count = slot.first;
    s.share_pct = 100.0 * slot.first / total;
    s.mean_eta_nj = slot.second / slot.first;
    out.push_back(s);
  }
  return out;
}

struct SurfaceCell {
  double snr_db = 0;
  int l_max_frames = 1;
  double ratio = 0;  // mean eta(EG, full set) / mean eta(GG, baseline set)
};

inline double mean_eta_nj(const std::vector<TrialRecord>& records, const std::string& scheme,
                          double snr_db, int* count = nullptr) {
  double sum = 0;
  int n = 0;
  for (const TrialRecord& r : records) {
    if (r.scheme != scheme || r.snr_db != snr_db || r.outage) continue;
    sum += r.eta_nj_per_bit;
    ++n;
  }
  if (count) *count = n;
  return n > 0 ? sum / n : 0;
}

// Relative energy of the optimized receiver versus the fixed baseline over
// the (snr, l_max) grid. Requires eg and gg_base records in every cell.
inline std::vector<SurfaceCell> efficiency_surface(const std::vector<RecordSet>& sets) {
  if (sets.empty()) throw std::invalid_argument("efficiency_surface: no record sets");
  std::vector<SurfaceCell> cells;
  std::string missing;
  for (const RecordSet& set : sets) {
    std::vector<double> snrs;
    for (const TrialRecord& r : set.records)
      if (snrs.empty() || snrs.back() != r.snr_db) snrs.push_back(r.snr_db);
    std::sort(snrs.begin(), snrs.end());
    snrs.erase(std::unique(snrs.begin(), snrs.end()), snrs.end());
    for (double snr : snrs) {
      int n_eg = 0, n_base = 0;
      const double eg = mean_eta_nj(set.records, "eg", snr, &n_eg);
      const double base = mean_eta_nj(set.records, "gg_base", snr, &n_base);
      if (n_eg == 0 || n_base == 0) {
        missing += " (snr=" + format_g6(snr) + ", l_max=" + std::to_string(set.l_max_frames) + ")";
        continue;
      }
      cells.push_back({snr, set.l_max_frames, eg / base});
    }
  }
  if (!missing.empty())
    throw std::invalid_argument("efficiency_surface: missing grid cells:" + missing);
  return cells;
}

}  // namespace eelink
