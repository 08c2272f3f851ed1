#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "eelink/detect.hpp"
#include "eelink/energy.hpp"

namespace eelink {

enum class RaScheme { GG, EG, GAEG };

inline const char* to_string(RaScheme s) {
  switch (s) {
    case RaScheme::GG: return "gg";
    case RaScheme::EG: return "eg";
    default: return "gaeg";
  }
}

// One feasible candidate: a mode, the aggregation factor it was evaluated
// at, and its energy/goodput annotations.
struct AnnotatedMode {
  SystemMode mode;
  int m_frames = 1;
  double eta = 0;      // J per information bit
  double goodput = 0;  // delivered bits per second
};

struct RaDecision {
  RaScheme scheme = RaScheme::GG;
  bool outage = true;
  SystemMode chosen;
  int m_frames = 1;
  double eta = 0;
  double goodput = 0;
  double k = 0;  // GAEG bound factor, zero otherwise
};

namespace detail {

// Stable total order used to break exact ties; keeps every selector
// deterministic. Lower MCS index first, then MMSE, fewer chains, DVFS on,
// fewer aggregated frames.
inline bool tie_order(const AnnotatedMode& a, const AnnotatedMode& b) {
  if (a.mode.mcs.index != b.mode.mcs.index) return a.mode.mcs.index < b.mode.mcs.index;
  if (a.mode.detector != b.mode.detector) return a.mode.detector == Detector::MMSE;
  if (a.mode.n_rx != b.mode.n_rx) return a.mode.n_rx < b.mode.n_rx;
  if (a.mode.dvfs != b.mode.dvfs) return a.mode.dvfs;
  return a.m_frames < b.m_frames;
}

inline bool better_goodput(const AnnotatedMode& a, const AnnotatedMode& b) {
  if (a.goodput != b.goodput) return a.goodput > b.goodput;
  if (a.eta != b.eta) return a.eta < b.eta;
  return tie_order(a, b);
}

inline bool better_eta(const AnnotatedMode& a, const AnnotatedMode& b) {
  if (a.eta != b.eta) return a.eta < b.eta;
  if (a.goodput != b.goodput) return a.goodput > b.goodput;
  return tie_order(a, b);
}

inline RaDecision from_choice(RaScheme scheme, const AnnotatedMode& pick) {
  RaDecision d;
  d.scheme = scheme;
  d.outage = false;
  d.chosen = pick.mode;
  d.m_frames = pick.m_frames;
  d.eta = pick.eta;
  d.goodput = pick.goodput;
  return d;
}

}  // namespace detail

// Goodput-guided selection: highest goodput among feasible candidates.
inline RaDecision select_gg(std::span<const AnnotatedMode> feasible) {
  RaDecision d;
  d.scheme = RaScheme::GG;
  const AnnotatedMode* best = nullptr;
  for (const AnnotatedMode& c : feasible)
    if (!best || detail::better_goodput(c, *best)) best = &c;
  return best ? detail::from_choice(RaScheme::GG, *best) : d;
}

// Energy-guided selection: lowest energy per information bit.
inline RaDecision select_eg(std::span<const AnnotatedMode> feasible) {
  RaDecision d;
  d.scheme = RaScheme::EG;
  const AnnotatedMode* best = nullptr;
  for (const AnnotatedMode& c : feasible)
    if (!best || detail::better_eta(c, *best)) best = &c;
  return best ? detail::from_choice(RaScheme::EG, *best) : d;
}

// Goodput-aware energy-guided selection: best goodput among candidates whose
// energy stays strictly below k times the energy-guided optimum. The
// energy-guided choice itself always qualifies, so the result exists
// whenever any candidate does.
inline RaDecision select_gaeg(std::span<const AnnotatedMode> feasible, double k) {
  if (!(k > 1.0)) throw std::invalid_argument("select_gaeg: k must exceed 1");
  RaDecision d;
  d.scheme = RaScheme::GAEG;
  d.k = k;
  const RaDecision eg = select_eg(feasible);
  if (eg.outage) return d;
  const double bound = k * eg.eta;
  const AnnotatedMode* best = nullptr;
  for (const AnnotatedMode& c : feasible) {
    if (!(c.eta < bound)) continue;
    if (!best || detail::better_goodput(c, *best)) best = &c;
  }
  if (!best) {
    // Degenerate zero-energy optimum: the strict bound admits nothing, so
    // keep the energy-guided choice.
    d = eg;
    d.scheme = RaScheme::GAEG;
    d.k = k;
    return d;
  }
  d = detail::from_choice(RaScheme::GAEG, *best);
  d.k = k;
  return d;
}

// Everything needed to annotate a mode universe against one realization.
struct EvalContext {
  std::vector<SystemMode> modes;
  EnergyLut lut;
  TimingConfig timing;
  OracleGammas gammas;
  int base_frame_bits = 12000;  // 1.5 kB subframe
};

// Feasible candidates at a fixed aggregation factor m (L = m * base bits).
// Shares oracle work through the caller-provided ModeOracle.
inline std::vector<AnnotatedMode> annotate_feasible(const EvalContext& ctx, ModeOracle& oracle,
                                                    int m_frames) {
  if (m_frames < 1) throw std::invalid_argument("annotate_feasible: m_frames must be positive");
  const long l_bits = static_cast<long>(ctx.base_frame_bits) * m_frames;
  std::vector<AnnotatedMode> out;
  out.reserve(ctx.modes.size());
  for (const SystemMode& mode : ctx.modes) {
    if (!oracle.feasible(mode, l_bits)) continue;
    AnnotatedMode a;
    a.mode = mode;
    a.m_frames = m_frames;
    a.eta = eta(mode, l_bits, 0, ctx.lut, ctx.timing).eta_total;
    a.goodput = goodput_bps(mode.mcs, l_bits, ctx.timing);
    out.push_back(a);
  }
  return out;
}

inline std::vector<AnnotatedMode> annotate_feasible(const EvalContext& ctx,
                                                    const ChannelRealization& ch, int m_frames) {
  ModeOracle oracle(ch, ctx.gammas);
  return annotate_feasible(ctx, oracle, m_frames);
}

inline RaDecision apply_scheme(RaScheme scheme, std::span<const AnnotatedMode> feasible,
                               double k) {
  switch (scheme) {
    case RaScheme::GG: return select_gg(feasible);
    case RaScheme::EG: return select_eg(feasible);
    default: return select_gaeg(feasible, k);
  }
}

// Joint mode / aggregation-length selection: the scheme objective runs over
// every (mode, m) pair with m up to l_max_frames. With l_max_frames = 1
// this is exactly the fixed-length path.
inline RaDecision select_with_aggregation(const EvalContext& ctx, RaScheme scheme,
                                          const ChannelRealization& ch, int l_max_frames,
                                          double k = 1.05) {
  if (l_max_frames < 1 || l_max_frames > 16)
    throw std::invalid_argument("select_with_aggregation: l_max_frames outside 1..16");
  ModeOracle oracle(ch, ctx.gammas);
  std::vector<AnnotatedMode> joint;
  for (int m = 1; m <= l_max_frames; ++m) {
    std::vector<AnnotatedMode> at_m = annotate_feasible(ctx, oracle, m);
    joint.insert(joint.end(), at_m.begin(), at_m.end());
  }
  return apply_scheme(scheme, joint, k);
}

}  // namespace eelink
