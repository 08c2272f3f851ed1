#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eelink/mcs.hpp"

namespace eelink {

enum class Detector { MMSE, LRALD };

inline const char* to_string(Detector d) {
  return d == Detector::MMSE ? "mmse" : "lrald";
}

// One point of the extended system-mode set: transmission scheme plus
// receiver configuration.
struct SystemMode {
  McsEntry mcs;
  int n_rx = 4;  // active receive chains
  Detector detector = Detector::MMSE;
  bool dvfs = false;
};

inline void validate(const SystemMode& mode) {
  validate(mode.mcs);
  if (mode.n_rx < 1 || mode.n_rx > 4) throw std::invalid_argument("mode: n_rx out of range");
  if (mode.n_rx < mode.mcs.n_ss) throw std::invalid_argument("mode: fewer chains than streams");
  if (mode.n_rx < 4 && !mode.dvfs)
    throw std::invalid_argument("mode: reduced-chain modes always run with DVFS");
}

// Extended mode set for the given detectors. Per detector: every MCS at
// n_rx_max chains without DVFS (full-chain case only), the same with DVFS,
// then each reduced chain count with the MCSs it can carry, DVFS on.
// Deterministic ordering throughout.
inline std::vector<SystemMode> enumerate_modes(const std::vector<Detector>& detectors,
                                               int n_rx_max,
                                               const McsTable& table = default_mcs_table()) {
  if (detectors.empty()) throw std::invalid_argument("enumerate_modes: no detectors");
  if (n_rx_max < 1 || n_rx_max > 4) throw std::invalid_argument("enumerate_modes: n_rx_max out of range");
  std::vector<SystemMode> modes;
  for (Detector det : detectors) {
    if (n_rx_max == 4) {
      for (const McsEntry& mcs : table) modes.push_back({mcs, 4, det, false});
      for (const McsEntry& mcs : table) modes.push_back({mcs, 4, det, true});
      for (int n_rx = 3; n_rx >= 1; --n_rx)
        for (const McsEntry& mcs : table)
          if (mcs.n_ss <= n_rx) modes.push_back({mcs, n_rx, det, true});
    } else {
      for (int n_rx = n_rx_max; n_rx >= 1; --n_rx)
        for (const McsEntry& mcs : table)
          if (mcs.n_ss <= n_rx) modes.push_back({mcs, n_rx, det, true});
    }
  }
  return modes;
}

// Protocol timing constants. Defaults follow the usual 40 MHz frame layout;
// all overridable through the config file.
struct TimingConfig {
  double header_us = 28.0;    // legacy preamble + HT header
  double ifs_us = 16.0;
  double ack_slot_us = 44.0;
  double symbol_us = 4.0;
  int service_tail_bits = 22;
};

// Long training fields required for channel estimation.
inline int n_ltf(int n_ss) {
  switch (n_ss) {
    case 1: return 1;
    case 2: return 2;
    case 3: return 4;
    case 4: return 4;
    default: throw std::invalid_argument("n_ltf: bad stream count");
  }
}

struct FrameTiming {
  double overhead_s = 0;  // training + header + IFS + ACK slot
  double payload_s = 0;
  double symbol_s = 0;
};

inline FrameTiming frame_timing(const McsEntry& mcs, long payload_bits,
                                const TimingConfig& cfg = {}) {
  if (payload_bits < 1) throw std::invalid_argument("frame_timing: payload must be at least one bit");
  const double symbol_s = cfg.symbol_us * 1e-6;
  const long symbols = (payload_bits + cfg.service_tail_bits + n_dbps(mcs) - 1) / n_dbps(mcs);
  FrameTiming t;
  t.symbol_s = symbol_s;
  t.payload_s = static_cast<double>(symbols) * symbol_s;
  t.overhead_s = (cfg.header_us + cfg.ifs_us + cfg.ack_slot_us) * 1e-6 +
                 n_ltf(mcs.n_ss) * symbol_s;
  return t;
}

inline FrameTiming frame_timing(const SystemMode& mode, long payload_bits,
                                const TimingConfig& cfg = {}) {
  return frame_timing(mode.mcs, payload_bits, cfg);
}

// Delivered bits over the full frame duration, one overhead per frame.
inline double goodput_bps(const McsEntry& mcs, long payload_bits,
                          const TimingConfig& cfg = {}) {
  const FrameTiming t = frame_timing(mcs, payload_bits, cfg);
  return static_cast<double>(payload_bits) / (t.overhead_s + t.payload_s);
}

}  // namespace eelink
