// Command-line front end of the sweep harness: loads a config file, applies
// flag overrides, runs the Monte-Carlo sweep, and writes CSV outputs.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "eelink/eelink.hpp"

namespace {

std::string sibling_path(const std::string& out_path, const std::string& suffix) {
  const auto dot = out_path.rfind('.');
  if (dot == std::string::npos || out_path.find('/', dot) != std::string::npos)
    return out_path + suffix;
  return out_path.substr(0, dot) + suffix + out_path.substr(dot);
}

void write_modes_summary(const std::string& path, const std::vector<eelink::TrialRecord>& records,
                         const eelink::SweepConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "snr_db,scheme,mcs,detector,share_pct,mean_eta_nj\n";
  for (double snr : cfg.snr_grid) {
    for (const eelink::SchemeSpec& scheme : cfg.schemes) {
      std::vector<eelink::TrialRecord> group;
      for (const eelink::TrialRecord& r : records)
        if (r.snr_db == snr && r.scheme == scheme.label) group.push_back(r);
      if (group.empty()) continue;
      bool any_success = false;
      for (const auto& r : group) any_success = any_success || !r.outage;
      if (!any_success) continue;
      for (const eelink::ModeShare& s : eelink::mode_distribution(group)) {
        out << eelink::format_g6(snr) << ',' << scheme.label << ',' << s.mcs << ','
            << to_string(s.detector) << ',' << eelink::format_g6(s.share_pct) << ','
            << eelink::format_g6(s.mean_eta_nj) << '\n';
      }
    }
  }
}

void write_surface_summary(const std::string& path, const std::vector<eelink::RecordSet>& sets) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "snr_db,l_max_frames,relative_energy\n";
  for (const eelink::SurfaceCell& c : eelink::efficiency_surface(sets))
    out << eelink::format_g6(c.snr_db) << ',' << c.l_max_frames << ','
        << eelink::format_g6(c.ratio) << '\n';
}

void print_overview(const std::vector<eelink::TrialRecord>& records,
                    const eelink::SweepConfig& cfg) {
  std::cout << "snr_db  scheme    mean_eta_nj  mean_goodput_mbps  outage_pct\n";
  for (double snr : cfg.snr_grid) {
    for (const eelink::SchemeSpec& scheme : cfg.schemes) {
      double eta_sum = 0, gp_sum = 0;
      int n = 0, ok = 0;
      for (const eelink::TrialRecord& r : records) {
        if (r.snr_db != snr || r.scheme != scheme.label) continue;
        ++n;
        gp_sum += r.goodput_mbps;
        if (!r.outage) {
          ++ok;
          eta_sum += r.eta_nj_per_bit;
        }
      }
      if (n == 0) continue;
      char line[160];
      std::snprintf(line, sizeof line, "%6g  %-8s %12.4g %18.4g %11.2f\n", snr,
                    scheme.label.c_str(), ok ? eta_sum / ok : 0.0, gp_sum / n,
                    100.0 * (n - ok) / n);
      std::cout << line;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level Monte-Carlo sweep for energy-aware rate adaptation"};

  std::string config_path, snr_text, scenario_text, ra_text, lut_path, out_path, summary_text;
  int trials = -1, l_max = -1;
  long seed = -1;
  double k = -1;

  app.add_option("--config", config_path, "Config file (INI sections: sweep, channel, lut, ra, timing, mcs)");
  app.add_option("--snr", snr_text, "SNR grid in dB: comma list or start:step:stop");
  app.add_option("--trials", trials, "Channel realizations per SNR point");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--scenario", scenario_text, "fixed or agg")
      ->check(CLI::IsMember({"fixed", "agg"}));
  app.add_option("--l-max", l_max, "Maximum aggregated frames (1..16)");
  app.add_option("--ra", ra_text, "Schemes: gg,eg,gaeg,gg_base,gg_dvfs or all");
  app.add_option("--k", k, "GAEG energy bound factor (> 1)");
  app.add_option("--lut", lut_path, "Energy LUT file overriding built-in defaults");
  app.add_option("--out", out_path, "Output CSV path");
  app.add_option("--summary", summary_text, "none, modes or surface")
      ->check(CLI::IsMember({"none", "modes", "surface"}));

  CLI11_PARSE(app, argc, argv);

  try {
    eelink::SweepConfig cfg;
    if (!config_path.empty()) cfg = eelink::load_config_file(config_path);
    if (!snr_text.empty()) cfg.snr_grid = eelink::parse_snr_grid(snr_text);
    if (trials >= 0) cfg.trials = trials;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!scenario_text.empty())
      cfg.scenario = scenario_text == "agg" ? eelink::Scenario::Aggregation
                                            : eelink::Scenario::FixedLength;
    if (l_max >= 0) cfg.l_max_frames = l_max;
    if (!ra_text.empty()) cfg.schemes = eelink::parse_schemes(ra_text);
    if (k > 0) cfg.k = k;
    if (!lut_path.empty()) cfg.lut = eelink::load_lut_file(lut_path, cfg.lut);
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!summary_text.empty()) cfg.summary = summary_text;
    cfg.validate_config();

    std::vector<eelink::TrialRecord> records;
    if (cfg.summary == "surface") {
      if (cfg.scenario != eelink::Scenario::Aggregation)
        throw std::invalid_argument("surface summary requires --scenario agg");
      const std::vector<eelink::RecordSet> sets = eelink::run_surface(cfg);
      records = sets.back().records;
      write_surface_summary(sibling_path(cfg.out_path, "_surface"), sets);
    } else {
      records = eelink::run_sweep(cfg);
    }

    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
    eelink::write_csv(out, records);
    out.close();

    if (cfg.summary == "modes")
      write_modes_summary(sibling_path(cfg.out_path, "_modes"), records, cfg);

    print_overview(records, cfg);
    std::cout << "wrote " << cfg.out_path << " (" << records.size() << " records)\n";
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
