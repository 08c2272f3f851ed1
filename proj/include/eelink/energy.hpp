#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eelink/mode.hpp"

namespace eelink {

// Per-component calibration values behind the receiver energy model. The
// defaults are an illustrative operating point for a 4x4 receiver; any
// concrete design replaces them through a LUT file. Powers in watts,
// energies in joules.
struct EnergyLut {
  double p_af_per_chain = 0.018;    // analog/RF frontend, per active chain
  double p_df_per_chain = 0.0045;   // digital frontend, per chain at full rate
  double p_fft_per_chain = 0.0055;  // FFT, per chain at full rate
  std::array<double, 4> p_det_mmse = {0.095, 0.115, 0.125, 0.140};   // by n_ss
  std::array<double, 4> p_det_lrald = {0.120, 0.165, 0.200, 0.240};  // by n_ss
  double eta_cc_nominal = 0.35e-9;  // decoder energy per coded bit at nominal voltage
  double e_chpp = 0.5e-6;           // channel estimation + preprocessing, per chain per frame
  double e_header_fixed = 3e-6;     // header/sync digital processing per frame
  double e_ack = 2e-6;              // ACK transmission per frame
  double c_dec_core = 432e6;        // nominal coded throughput per decoder core
  double r_min = 0.4;               // DVFS rate-ratio floor

  double p_det(Detector det, int n_ss) const {
    if (n_ss < 1 || n_ss > 4) throw std::invalid_argument("p_det: bad stream count");
    return det == Detector::MMSE ? p_det_mmse[n_ss - 1] : p_det_lrald[n_ss - 1];
  }

  void validate() const {
    auto nonneg = [](double v) { return v >= 0 && std::isfinite(v); };
    bool ok = nonneg(p_af_per_chain) && nonneg(p_df_per_chain) && nonneg(p_fft_per_chain) &&
              nonneg(eta_cc_nominal) && nonneg(e_chpp) && nonneg(e_header_fixed) &&
              nonneg(e_ack);
    for (double v : p_det_mmse) ok = ok && nonneg(v);
    for (double v : p_det_lrald) ok = ok && nonneg(v);
    if (!ok) throw std::invalid_argument("energy lut: negative or non-finite entry");
    if (!(c_dec_core > 0)) throw std::invalid_argument("energy lut: c_dec_core must be positive");
    if (!(r_min > 0 && r_min <= 1)) throw std::invalid_argument("energy lut: r_min outside (0,1]");
  }
};

// Energy-per-operation multiplier of voltage/frequency scaling at rate
// ratio r: frequency tracks supply voltage, power goes with its square, so
// energy per operation falls as max(r, r_min)^2.
inline double dvfs_scale(double rate_ratio, double r_min) {
  if (!(rate_ratio > 0) || rate_ratio > 1.0)
    throw std::invalid_argument("dvfs_scale: rate ratio outside (0,1]");
  if (!(r_min > 0 && r_min <= 1)) throw std::invalid_argument("dvfs_scale: r_min outside (0,1]");
  const double r = std::max(rate_ratio, r_min);
  return r * r;
}

// Decoder energy per bit. The per-core rate ratio against the nominal
// decoder throughput sets the DVFS operating point.
inline double eta_cc(const SystemMode& mode, const EnergyLut& lut) {
  if (!mode.dvfs) return lut.eta_cc_nominal;
  const int cores = decoder_cores(mode.mcs);
  const double ratio = coded_rate(mode.mcs, cores) / lut.c_dec_core;
  if (ratio > 1.0) throw std::invalid_argument("eta_cc: decoder overdriven, raise c_dec_core");
  return lut.eta_cc_nominal * dvfs_scale(ratio, lut.r_min);
}

// Steady-state receive power during the data phase. The time-interleaved
// digital chains run slower when fewer antennas are active, which DVFS
// turns into quadratic savings; the analog part scales linearly only.
inline double p_bb(const SystemMode& mode, const EnergyLut& lut) {
  validate(mode);
  const double digital_scale =
      mode.dvfs ? dvfs_scale(mode.n_rx / 4.0, lut.r_min) : 1.0;
  return lut.p_af_per_chain * mode.n_rx +
         (lut.p_df_per_chain + lut.p_fft_per_chain) * mode.n_rx * digital_scale +
         lut.p_det(mode.detector, mode.mcs.n_ss);
}

// Per-frame overhead energy: baseband running across the non-payload span
// plus fixed training, header, and ACK costs.
inline double e_h(const SystemMode& mode, const EnergyLut& lut, const FrameTiming& timing) {
  return p_bb(mode, lut) * timing.overhead_s + lut.e_chpp * mode.n_rx + lut.e_header_fixed +
         lut.e_ack;
}

struct EnergyBreakdown {
  double e_h = 0;       // J per frame
  double p_bb = 0;      // W
  double eta_cc = 0;    // J per bit
  double eta_total = std::numeric_limits<double>::infinity();  // J per information bit
  bool feasible = false;
};

// Energy per successfully received information bit for one mode and frame
// length. A failing packet (p_e = 1) yields the infeasible marker and never
// participates in mode selection.
inline EnergyBreakdown eta(const SystemMode& mode, long l_bits, int p_e, const EnergyLut& lut,
                           const TimingConfig& timing_cfg = {}) {
  if (l_bits < 1) throw std::invalid_argument("eta: frame length must be at least one bit");
  if (p_e != 0 && p_e != 1) throw std::invalid_argument("eta: genie verdict must be 0 or 1");
  EnergyBreakdown out;
  const FrameTiming timing = frame_timing(mode.mcs, l_bits, timing_cfg);
  out.e_h = e_h(mode, lut, timing);
  out.p_bb = p_bb(mode, lut);
  out.eta_cc = eta_cc(mode, lut);
  if (p_e == 1) return out;
  out.feasible = true;
  out.eta_total =
      out.e_h / static_cast<double>(l_bits) + out.p_bb / data_rate(mode.mcs) + out.eta_cc;
  return out;
}

}  // namespace eelink
