#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eelink/detect.hpp"
#include "eelink/energy.hpp"
#include "eelink/ra.hpp"

namespace eelink {

enum class Scenario { FixedLength, Aggregation };

// Which slice of the extended mode set a scheme may select from.
//   Full            - both detectors, all chain counts, DVFS variants
//   Baseline        - 4 chains, no DVFS, MMSE only (the reference receiver)
//   DecoderDvfsOnly - 4 chains, MMSE, with and without decoder DVFS
enum class ModeSetKind { Full, Baseline, DecoderDvfsOnly };

struct SchemeSpec {
  std::string label;
  RaScheme policy = RaScheme::GG;
  ModeSetKind mode_set = ModeSetKind::Full;
};

inline SchemeSpec scheme_from_token(const std::string& token) {
  if (token == "gg") return {"gg", RaScheme::GG, ModeSetKind::Full};
  if (token == "eg") return {"eg", RaScheme::EG, ModeSetKind::Full};
  if (token == "gaeg") return {"gaeg", RaScheme::GAEG, ModeSetKind::Full};
  if (token == "gg_base") return {"gg_base", RaScheme::GG, ModeSetKind::Baseline};
  if (token == "gg_dvfs") return {"gg_dvfs", RaScheme::GG, ModeSetKind::DecoderDvfsOnly};
  throw std::invalid_argument("unknown scheme token: " + token);
}

inline std::vector<SchemeSpec> parse_schemes(const std::string& list) {
  std::vector<SchemeSpec> out;
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    if (token == "all") {
      for (const char* t : {"gg", "eg", "gaeg", "gg_base", "gg_dvfs"})
        out.push_back(scheme_from_token(t));
    } else {
      out.push_back(scheme_from_token(token));
    }
  }
  if (out.empty()) throw std::invalid_argument("scheme list is empty");
  return out;
}

inline std::vector<SystemMode> build_mode_set(ModeSetKind kind,
                                              const McsTable& table = default_mcs_table()) {
  std::vector<SystemMode> full = enumerate_modes({Detector::MMSE, Detector::LRALD}, 4, table);
  std::vector<SystemMode> out;
  for (const SystemMode& m : full) {
    switch (kind) {
      case ModeSetKind::Full:
        out.push_back(m);
        break;
      case ModeSetKind::Baseline:
        if (m.detector == Detector::MMSE && m.n_rx == 4 && !m.dvfs) out.push_back(m);
        break;
      case ModeSetKind::DecoderDvfsOnly:
        if (m.detector == Detector::MMSE && m.n_rx == 4) out.push_back(m);
        break;
    }
  }
  return out;
}

struct ChannelConfig {
  enum class Model { Flat, Selective };
  Model model = Model::Flat;
  double rms_delay_ns = 30.0;
  int n_subcarriers = 108;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double to_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + value);
  }
  if (pos != value.size())
    throw std::invalid_argument("config: trailing junk in '" + key + "': " + value);
  return v;
}

inline long to_long(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
  }
  if (pos != value.size())
    throw std::invalid_argument("config: trailing junk in '" + key + "': " + value);
  return v;
}

}  // namespace detail

// "15", "0,5,10" or "start:step:stop" (inclusive).
inline std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string part;
    std::vector<double> v;
    while (std::getline(ss, part, ':')) v.push_back(detail::to_double("snr", part));
    if (v.size() != 3 || !(v[1] > 0) || v[2] < v[0])
      throw std::invalid_argument("config: snr range must be start:step:stop with positive step");
    for (double x = v[0]; x <= v[2] + 1e-9; x += v[1]) grid.push_back(x);
    return grid;
  }
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = detail::trim(part);
    if (!part.empty()) grid.push_back(detail::to_double("snr", part));
  }
  if (grid.empty()) throw std::invalid_argument("config: empty snr list");
  return grid;
}

struct SweepConfig {
  std::vector<double> snr_grid = parse_snr_grid("0:2.5:35");  // 15 points
  int trials = 1000;
  std::uint64_t seed = 1;
  Scenario scenario = Scenario::FixedLength;
  int l_max_frames = 1;
  std::vector<SchemeSpec> schemes = parse_schemes("all");
  double k = 1.05;
  ChannelConfig channel;
  TimingConfig timing;
  OracleGammas gammas;
  EnergyLut lut;
  McsTable mcs_table = default_mcs_table();
  int base_frame_bits = 12000;
  std::string out_path = "eelink_sweep.csv";
  std::string summary = "none";  // none | modes | surface

  void validate_config() const {
    if (snr_grid.empty()) throw std::invalid_argument("config: empty snr grid");
    if (trials < 1) throw std::invalid_argument("config: trials must be at least 1");
    if (l_max_frames < 1 || l_max_frames > 16)
      throw std::invalid_argument("config: l_max_frames outside 1..16");
    if (schemes.empty()) throw std::invalid_argument("config: no schemes requested");
    if (!(k > 1.0)) throw std::invalid_argument("config: k must exceed 1");
    if (base_frame_bits < 1) throw std::invalid_argument("config: base_frame_bits must be positive");
    if (summary != "none" && summary != "modes" && summary != "surface")
      throw std::invalid_argument("config: summary must be none, modes or surface");
    if (!(channel.rms_delay_ns > 0)) throw std::invalid_argument("config: rms_delay_ns must be positive");
    if (channel.n_subcarriers < 1) throw std::invalid_argument("config: n_subcarriers must be at least 1");
    lut.validate();
    validate(mcs_table);
    if (!(gammas.mmse > 0) || !(gammas.lrald > 0))
      throw std::invalid_argument("config: detector gammas must be positive");
  }
};

// Sectioned key=value text. '#' and ';' start comments, keys must be unique
// within their section.
using IniData = std::map<std::string, std::map<std::string, std::string>>;

inline IniData parse_ini(std::istream& in) {
  IniData data;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": unterminated section");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty section name");
      data[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    if (section.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": key outside any section");
    if (!data[section].emplace(key, value).second)
      throw std::invalid_argument("config: duplicate key '" + key + "' in [" + section + "]");
  }
  return data;
}

// Applies one LUT key. Keys match the field names; the detector table uses
// p_det.<mmse|lrald>.<n_ss>. Unknown keys are rejected.
inline void apply_lut_key(EnergyLut& lut, const std::string& key, const std::string& value) {
  const double v = detail::to_double(key, value);
  if (key == "p_af_per_chain") lut.p_af_per_chain = v;
  else if (key == "p_df_per_chain") lut.p_df_per_chain = v;
  else if (key == "p_fft_per_chain") lut.p_fft_per_chain = v;
  else if (key == "eta_cc_nominal") lut.eta_cc_nominal = v;
  else if (key == "e_chpp") lut.e_chpp = v;
  else if (key == "e_header_fixed") lut.e_header_fixed = v;
  else if (key == "e_ack") lut.e_ack = v;
  else if (key == "c_dec_core") lut.c_dec_core = v;
  else if (key == "r_min") lut.r_min = v;
  else if (key.rfind("p_det.", 0) == 0) {
    const std::string rest = key.substr(6);
    const auto dot = rest.find('.');
    if (dot == std::string::npos) throw std::invalid_argument("lut: malformed key " + key);
    const std::string det = rest.substr(0, dot);
    const long n_ss = detail::to_long(key, rest.substr(dot + 1));
    if (n_ss < 1 || n_ss > 4) throw std::invalid_argument("lut: stream count out of range in " + key);
    if (det == "mmse") lut.p_det_mmse[n_ss - 1] = v;
    else if (det == "lrald") lut.p_det_lrald[n_ss - 1] = v;
    else throw std::invalid_argument("lut: unknown detector in " + key);
  } else {
    throw std::invalid_argument("lut: unknown key " + key);
  }
}

// Flat key = value file holding EnergyLut overrides.
inline EnergyLut load_lut_file(const std::string& path, EnergyLut base = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lut file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("lut line " + std::to_string(line_no) + ": expected key = value");
    apply_lut_key(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  base.validate();
  return base;
}

// Merges parsed INI data into a SweepConfig, rejecting unknown sections and
// keys so typos never fall back to silent defaults.
inline SweepConfig config_from_ini(const IniData& ini, SweepConfig cfg = {}) {
  for (const auto& [section, entries] : ini) {
    if (section == "sweep") {
      for (const auto& [key, value] : entries) {
        if (key == "snr") cfg.snr_grid = parse_snr_grid(value);
        else if (key == "trials") cfg.trials = static_cast<int>(detail::to_long(key, value));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::to_long(key, value));
        else if (key == "scenario") {
          if (value == "fixed") cfg.scenario = Scenario::FixedLength;
          else if (value == "agg") cfg.scenario = Scenario::Aggregation;
          else throw std::invalid_argument("config: scenario must be fixed or agg");
        } else if (key == "l_max_frames") cfg.l_max_frames = static_cast<int>(detail::to_long(key, value));
        else if (key == "base_frame_bits") cfg.base_frame_bits = static_cast<int>(detail::to_long(key, value));
        else if (key == "out") cfg.out_path = value;
        else if (key == "summary") cfg.summary = value;
        else throw std::invalid_argument("config: unknown key '" + key + "' in [sweep]");
      }
    } else if (section == "channel") {
      for (const auto& [key, value] : entries) {
        if (key == "model") {
          if (value == "flat") cfg.channel.model = ChannelConfig::Model::Flat;
          else if (value == "selective") cfg.channel.model = ChannelConfig::Model::Selective;
          else throw std::invalid_argument("config: channel model must be flat or selective");
        } else if (key == "rms_delay_ns") cfg.channel.rms_delay_ns = detail::to_double(key, value);
        else if (key == "n_subcarriers") cfg.channel.n_subcarriers = static_cast<int>(detail::to_long(key, value));
        else throw std::invalid_argument("config: unknown key '" + key + "' in [channel]");
      }
    } else if (section == "lut") {
      // The file indirection applies first so inline keys act as overrides.
      if (auto it = entries.find("path"); it != entries.end())
        cfg.lut = load_lut_file(it->second, cfg.lut);
      for (const auto& [key, value] : entries)
        if (key != "path") apply_lut_key(cfg.lut, key, value);
    } else if (section == "ra") {
      for (const auto& [key, value] : entries) {
        if (key == "schemes") cfg.schemes = parse_schemes(value);
        else if (key == "k") cfg.k = detail::to_double(key, value);
        else if (key == "gamma_mmse") cfg.gammas.mmse = detail::to_double(key, value);
        else if (key == "gamma_lrald") cfg.gammas.lrald = detail::to_double(key, value);
        else throw std::invalid_argument("config: unknown key '" + key + "' in [ra]");
      }
    } else if (section == "timing") {
      for (const auto& [key, value] : entries) {
        if (key == "header_us") cfg.timing.header_us = detail::to_double(key, value);
        else if (key == "ifs_us") cfg.timing.ifs_us = detail::to_double(key, value);
        else if (key == "ack_slot_us") cfg.timing.ack_slot_us = detail::to_double(key, value);
        else if (key == "symbol_us") cfg.timing.symbol_us = detail::to_double(key, value);
        else if (key == "service_tail_bits") cfg.timing.service_tail_bits = static_cast<int>(detail::to_long(key, value));
        else throw std::invalid_argument("config: unknown key '" + key + "' in [timing]");
      }
    } else if (section == "mcs") {
      for (const auto& [key, value] : entries) {
        if (key.rfind("entry_", 0) != 0)
          throw std::invalid_argument("config: unknown key '" + key + "' in [mcs]");
        const long idx = detail::to_long(key, key.substr(6));
        if (idx < 0 || idx > 31) throw std::invalid_argument("config: mcs index out of range in " + key);
        std::stringstream ss(value);
        int q = 0, num = 0, den = 0;
        char slash = 0;
        if (!(ss >> q >> num >> slash >> den) || slash != '/')
          throw std::invalid_argument("config: mcs entry must be 'Q num/den' in " + key);
        std::string tail;
        if (ss >> tail) throw std::invalid_argument("config: trailing junk in " + key);
        McsEntry& e = cfg.mcs_table[idx];
        e.bits_per_symbol = q;
        e.code_rate_num = num;
        e.code_rate_den = den;
      }
    } else {
      throw std::invalid_argument("config: unknown section [" + section + "]");
    }
  }
  cfg.validate_config();
  return cfg;
}

inline SweepConfig load_config_file(const std::string& path, SweepConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  const IniData ini = parse_ini(in);
  return config_from_ini(ini, base);
}

}  // namespace eelink
