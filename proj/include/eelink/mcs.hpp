#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace eelink {

// Rate table geometry: 40 MHz channel, 800 ns guard interval.
inline constexpr int kDataSubcarriers = 108;
inline constexpr double kSymbolPeriodS = 4e-6;

// One decoder core handles system data rates up to this limit, two above it.
inline constexpr double kSingleCoreRateLimitBps = 300e6;

// One equal-modulation MCS, index 0..31.
struct McsEntry {
  int index = 0;
  int n_ss = 1;             // spatial streams
  int bits_per_symbol = 1;  // Q per subcarrier use
  int code_rate_num = 1;
  int code_rate_den = 2;

  double code_rate() const {
    return static_cast<double>(code_rate_num) / code_rate_den;
  }
};

inline void validate(const McsEntry& m) {
  if (m.index < 0 || m.index > 31) throw std::invalid_argument("mcs index out of range");
  if (m.n_ss != 1 + m.index / 8) throw std::invalid_argument("mcs n_ss inconsistent with index");
  if (m.bits_per_symbol != 1 && m.bits_per_symbol != 2 && m.bits_per_symbol != 4 &&
      m.bits_per_symbol != 6)
    throw std::invalid_argument("mcs modulation order unsupported");
  const bool rate_ok = (m.code_rate_num == 1 && m.code_rate_den == 2) ||
                       (m.code_rate_num == 2 && m.code_rate_den == 3) ||
                       (m.code_rate_num == 3 && m.code_rate_den == 4) ||
                       (m.code_rate_num == 5 && m.code_rate_den == 6);
  if (!rate_ok) throw std::invalid_argument("mcs code rate unsupported");
}

// Data bits per OFDM symbol; exact integer for every table entry.
inline int n_dbps(const McsEntry& m) {
  const long num = static_cast<long>(kDataSubcarriers) * m.bits_per_symbol *
                   m.code_rate_num * m.n_ss;
  if (num % m.code_rate_den != 0)
    throw std::invalid_argument("mcs: fractional bits per symbol");
  return static_cast<int>(num / m.code_rate_den);
}

// Coded bits per OFDM symbol (code rate cancels out).
inline int n_cbps(const McsEntry& m) {
  return kDataSubcarriers * m.bits_per_symbol * m.n_ss;
}

inline double data_rate(const McsEntry& m) { return n_dbps(m) / kSymbolPeriodS; }

inline int decoder_cores(const McsEntry& m) {
  return data_rate(m) <= kSingleCoreRateLimitBps ? 1 : 2;
}

// Coded throughput seen by each decoder core.
inline double coded_rate(const McsEntry& m, int cores) {
  if (cores != decoder_cores(m))
    throw std::invalid_argument("coded_rate: core count violates the 300 Mbps rule");
  return n_cbps(m) / kSymbolPeriodS / cores;
}

using McsTable = std::array<McsEntry, 32>;

// The 32 mandatory equal-modulation MCSs: the 8-entry modulation/rate cycle
// repeats once per stream count.
inline McsTable default_mcs_table() {
  struct Base {
    int q, num, den;
  };
  constexpr std::array<Base, 8> base = {{
      {1, 1, 2},  // BPSK 1/2
      {2, 1, 2},  // QPSK 1/2
      {2, 3, 4},  // QPSK 3/4
      {4, 1, 2},  // 16-QAM 1/2
      {4, 3, 4},  // 16-QAM 3/4
      {6, 2, 3},  // 64-QAM 2/3
      {6, 3, 4},  // 64-QAM 3/4
      {6, 5, 6},  // 64-QAM 5/6
  }};
  McsTable table{};
  for (int i = 0; i < 32; ++i) {
    const Base& b = base[i % 8];
    table[i] = McsEntry{i, 1 + i / 8, b.q, b.num, b.den};
  }
  return table;
}

inline void validate(const McsTable& table) {
  for (int i = 0; i < 32; ++i) {
    if (table[i].index != i) throw std::invalid_argument("mcs table: index mismatch at " + std::to_string(i));
    validate(table[i]);
    if (i % 8 != 0 && data_rate(table[i]) <= data_rate(table[i - 1]))
      throw std::invalid_argument("mcs table: data rate not increasing within stream group");
  }
}

}  // namespace eelink
