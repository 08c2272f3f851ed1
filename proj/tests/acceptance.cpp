// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured values so a run reads as a checklist.

#include <catch2/catch_amalgamated.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "eelink/eelink.hpp"

using namespace eelink;

namespace {

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double mean_eta(const std::vector<TrialRecord>& records, const std::string& scheme,
                double snr) {
  return mean_eta_nj(records, scheme, snr);
}

double mean_goodput(const std::vector<TrialRecord>& records, const std::string& scheme,
                    double snr) {
  double sum = 0;
  int n = 0;
  for (const TrialRecord& r : records) {
    if (r.scheme != scheme || r.snr_db != snr) continue;
    sum += r.goodput_mbps;  // outage rows count as zero goodput
    ++n;
  }
  return n ? sum / n : 0.0;
}

// Relative improvement of scheme a over scheme b in mean energy per bit.
double improvement(const std::vector<TrialRecord>& records, const std::string& a,
                   const std::string& b, double snr) {
  return 1.0 - mean_eta(records, a, snr) / mean_eta(records, b, snr);
}

Eigen::MatrixXcd random_matrix(TrialRng& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
  return m;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

TEST_CASE("criterion 1: extended mode enumeration") {
  const auto per_detector = enumerate_modes({Detector::MMSE}, 4);
  const auto both = enumerate_modes({Detector::MMSE, Detector::LRALD}, 4);
  std::map<std::pair<int, bool>, int> groups;
  for (const SystemMode& m : per_detector) groups[{m.n_rx, m.dvfs}]++;
  const bool pass = per_detector.size() == 112 && both.size() == 224 &&
                    groups[{4, false}] == 32 && groups[{4, true}] == 32 &&
                    groups[{3, true}] == 24 && groups[{2, true}] == 16 &&
                    groups[{1, true}] == 8;
  report(1, pass,
         fmt("mode counts %zu/%zu, subgroups %d/%d/%d/%d/%d", per_detector.size(), both.size(),
             groups[{4, false}], groups[{4, true}], groups[{3, true}], groups[{2, true}],
             groups[{1, true}]));
  CHECK(pass);
}

TEST_CASE("criterion 2: energy evaluator vs straight-line recomputation") {
  TrialRng rng(1001, 0);
  const McsTable table = default_mcs_table();
  double worst = 0;
  for (int it = 0; it < 1000; ++it) {
    EnergyLut lut;
    lut.p_af_per_chain = 0.005 + 0.2 * rng.uniform();
    lut.p_df_per_chain = 0.001 + 0.05 * rng.uniform();
    lut.p_fft_per_chain = 0.001 + 0.05 * rng.uniform();
    for (int s = 0; s < 4; ++s) {
      lut.p_det_mmse[s] = 0.005 + 0.2 * rng.uniform();
      lut.p_det_lrald[s] = 0.005 + 0.3 * rng.uniform();
    }
    lut.eta_cc_nominal = (0.1 + rng.uniform()) * 1e-9;
    lut.e_chpp = 2e-6 * rng.uniform();
    lut.e_header_fixed = 6e-6 * rng.uniform();
    lut.e_ack = 6e-6 * rng.uniform();
    lut.c_dec_core = 432e6 + 200e6 * rng.uniform();
    lut.r_min = 0.2 + 0.7 * rng.uniform();

    const McsEntry mcs = table[rng.next_u64() % 32];
    const int n_rx = mcs.n_ss + static_cast<int>(rng.next_u64() % (5 - mcs.n_ss));
    const Detector det = rng.uniform() < 0.5 ? Detector::MMSE : Detector::LRALD;
    const bool dvfs = n_rx < 4 ? true : rng.uniform() < 0.5;
    const SystemMode mode{mcs, n_rx, det, dvfs};
    const long l_bits = 1 + static_cast<long>(rng.next_u64() % 400000);
    const int p_e = rng.uniform() < 0.2 ? 1 : 0;

    // Straight-line recomputation from first principles.
    const double q = mcs.bits_per_symbol;
    const double dbps = 108.0 * q * mcs.code_rate_num * mcs.n_ss / mcs.code_rate_den;
    const double phi = dbps / 4e-6;
    const int ltf = mcs.n_ss == 3 ? 4 : mcs.n_ss;
    const double overhead = (28.0 + 16.0 + 44.0) * 1e-6 + ltf * 4e-6;
    const double digital = dvfs ? std::pow(std::max(n_rx / 4.0, lut.r_min), 2) : 1.0;
    const double pdet =
        det == Detector::MMSE ? lut.p_det_mmse[mcs.n_ss - 1] : lut.p_det_lrald[mcs.n_ss - 1];
    const double pbb = lut.p_af_per_chain * n_rx +
                       (lut.p_df_per_chain + lut.p_fft_per_chain) * n_rx * digital + pdet;
    const double eh = pbb * overhead + lut.e_chpp * n_rx + lut.e_header_fixed + lut.e_ack;
    const int cores = phi <= 300e6 ? 1 : 2;
    const double core_ratio = 108.0 * q * mcs.n_ss / 4e-6 / cores / lut.c_dec_core;
    const double ecc = dvfs ? lut.eta_cc_nominal * std::pow(std::max(core_ratio, lut.r_min), 2)
                            : lut.eta_cc_nominal;

    const EnergyBreakdown bd = eta(mode, l_bits, p_e, lut);
    if (p_e == 1) {
      if (bd.feasible || !std::isinf(bd.eta_total)) worst = 1.0;
      continue;
    }
    const double expected = (eh / l_bits + pbb / phi + ecc) / (1.0 - p_e);
    worst = std::max(worst, std::abs(bd.eta_total - expected) / expected);
  }
  const bool pass = worst <= 1e-12;
  report(2, pass, fmt("worst relative error %.3e over 1000 draws (tolerance 1e-12)", worst));
  CHECK(pass);
}

TEST_CASE("criterion 3: per-realization policy dominance") {
  EvalContext ctx;
  ctx.modes = build_mode_set(ModeSetKind::Full);
  const double k = 1.05;
  long checked = 0;
  long violations = 0;
  for (double snr = 0.0; snr <= 35.0; snr += 5.0) {
    for (int trial = 0; trial < 1300; ++trial) {
      const ChannelRealization ch = draw_flat(77, trial, snr);
      const std::vector<AnnotatedMode> feasible = annotate_feasible(ctx, ch, 1);
      const RaDecision gg = select_gg(feasible);
      const RaDecision eg = select_eg(feasible);
      ++checked;
      if (feasible.empty()) {
        if (!gg.outage || !eg.outage) ++violations;
        continue;
      }
      const RaDecision gaeg = select_gaeg(feasible, k);
      for (const AnnotatedMode& a : feasible)
        if (eg.eta > a.eta) ++violations;
      if (gg.goodput < gaeg.goodput || gaeg.goodput < eg.goodput) ++violations;
      if (!(gaeg.eta < k * eg.eta)) ++violations;
      if (eg.eta > gaeg.eta || gaeg.eta > gg.eta) ++violations;
    }
  }
  const bool pass = violations == 0 && checked >= 10000;
  report(3, pass, fmt("%ld realizations, %ld dominance violations", checked, violations));
  CHECK(pass);
}

TEST_CASE("criterion 4: lll reduction contracts") {
  TrialRng rng(1002, 0);
  int failures = 0;
  for (int it = 0; it < 1000; ++it) {
    const Eigen::MatrixXcd b = random_matrix(rng, 4, 4);
    const LllResult r = lll_reduce(b);
    bool ok = (r.reduced - b * r.transform).norm() < 1e-9 * b.norm();
    ok = ok && std::abs(std::abs(r.transform.determinant()) - 1.0) < 1e-9;

    // Size reduction and Lovasz condition on the result.
    const int n = 4;
    Eigen::MatrixXcd star = r.reduced;
    Eigen::MatrixXcd mu = Eigen::MatrixXcd::Identity(n, n);
    Eigen::VectorXd norm2(n);
    for (int kk = 0; kk < n; ++kk) {
      for (int j = 0; j < kk; ++j) {
        mu(kk, j) = star.col(j).dot(r.reduced.col(kk)) / norm2(j);
        star.col(kk) -= mu(kk, j) * star.col(j);
      }
      norm2(kk) = star.col(kk).squaredNorm();
    }
    for (int kk = 1; kk < n && ok; ++kk) {
      for (int j = 0; j < kk; ++j)
        ok = ok && std::abs(mu(kk, j).real()) <= 0.5 + 1e-9 &&
             std::abs(mu(kk, j).imag()) <= 0.5 + 1e-9;
      ok = ok && norm2(kk) >= (0.75 - std::norm(mu(kk, kk - 1))) * norm2(kk - 1) -
                                  1e-9 * norm2(kk - 1);
    }
    if (!ok) ++failures;
  }
  const bool pass = failures == 0;
  report(4, pass, fmt("%d of 1000 random bases failed a reduction contract", failures));
  CHECK(pass);
}

TEST_CASE("criterion 5: mmse sinr exactness and snr monotonicity") {
  // Scalar case: SINR = |h|^2 Es / sigma^2 exactly.
  TrialRng rng(1003, 0);
  double worst = 0;
  for (int it = 0; it < 200; ++it) {
    Eigen::MatrixXcd h(1, 1);
    h(0, 0) = rng.complex_gaussian();
    const double sigma2 = 0.01 + rng.uniform();
    const double expected = std::norm(h(0, 0)) / sigma2;
    const double got = mmse_sinr(h, sigma2)[0];
    worst = std::max(worst, std::abs(got - expected) / std::max(expected, 1e-30));
  }

  // Feasibility never flips from true to false as noise drops.
  const McsTable table = default_mcs_table();
  int flips = 0;
  int pairs = 0;
  TrialRng pick(1004, 0);
  while (pairs < 1000) {
    const McsEntry mcs = table[pick.next_u64() % 32];
    const int n_rx = mcs.n_ss + static_cast<int>(pick.next_u64() % (5 - mcs.n_ss));
    const SystemMode mode{mcs, n_rx, Detector::MMSE, n_rx < 4};
    const int trial = pairs;
    const double snr = 40.0 * pick.uniform();
    const ChannelRealization noisy = draw_flat(88, trial, snr);
    const ChannelRealization cleaner = draw_flat(88, trial, snr + 3.0);  // same H
    const bool before = packet_error_oracle(mode, noisy).feasible;
    const bool after = packet_error_oracle(mode, cleaner).feasible;
    if (before && !after) ++flips;
    ++pairs;
  }
  const bool pass = worst < 1e-12 && flips == 0;
  report(5, pass, fmt("scalar error %.2e, %d monotonicity flips in %d pairs", worst, flips, pairs));
  CHECK(pass);
}

TEST_CASE("criterion 6: byte-identical csv under a fixed seed") {
  SweepConfig cfg;
  cfg.snr_grid = {5.0, 20.0};
  cfg.trials = 120;
  cfg.seed = 20240917;
  cfg.schemes = parse_schemes("all");
  std::stringstream a, b;
  write_csv(a, run_sweep(cfg));
  write_csv(b, run_sweep(cfg));
  bool pass = a.str() == b.str() && !a.str().empty();

  // Same check through the installed binary.
  bool cli_ok = false;
#ifdef EELINK_SIM_BIN
  const std::filesystem::path dir = std::filesystem::temp_directory_path();
  const std::string out1 = (dir / "eelink_acc_run1.csv").string();
  const std::string out2 = (dir / "eelink_acc_run2.csv").string();
  const std::string base = std::string(EELINK_SIM_BIN) +
                           " --snr 10,25 --trials 60 --seed 7 --ra all --out ";
  if (std::system((base + out1 + " > /dev/null").c_str()) == 0 &&
      std::system((base + out2 + " > /dev/null").c_str()) == 0) {
    std::ifstream f1(out1), f2(out2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    cli_ok = !s1.str().empty() && s1.str() == s2.str();
  }
  std::remove(out1.c_str());
  std::remove(out2.c_str());
#endif
  pass = pass && cli_ok;
  report(6, pass, fmt("library run identical: %s, cli run identical: %s",
                      a.str() == b.str() ? "yes" : "no", cli_ok ? "yes" : "no"));
  CHECK(pass);
}

TEST_CASE("criterion 7: energy-guided gains at 15 and 30 dB") {
  SweepConfig cfg;
  cfg.trials = 1000;
  cfg.seed = 42;
  cfg.schemes = parse_schemes("eg,gg_base");

  cfg.snr_grid = {15.0};
  auto t0 = Clock::now();
  std::vector<TrialRecord> r15 = run_sweep(cfg);
  const double sec15 = seconds_since(t0);

  cfg.snr_grid = {30.0};
  t0 = Clock::now();
  std::vector<TrialRecord> r30 = run_sweep(cfg);
  const double sec30 = seconds_since(t0);

  const double gain15 = improvement(r15, "eg", "gg_base", 15.0);
  const double gain30 = improvement(r30, "eg", "gg_base", 30.0);
  const bool pass = gain15 >= 0.20 && gain15 <= 0.40 && gain30 >= 0.25 && gain30 <= 0.45 &&
                    sec15 <= 60.0 && sec30 <= 60.0;
  report(7, pass,
         fmt("eg gain %.1f%% at 15 dB (window 20-40), %.1f%% at 30 dB (window 25-45), "
             "%.2f s / %.2f s per point",
             100 * gain15, 100 * gain30, sec15, sec30));
  CHECK(pass);
}

TEST_CASE("criterion 8: peak energy-guided gain across the sweep") {
  SweepConfig cfg;
  cfg.trials = 1000;
  cfg.seed = 42;
  cfg.snr_grid = parse_snr_grid("0:5:35");
  cfg.schemes = parse_schemes("eg,gg_base");
  const std::vector<TrialRecord> records = run_sweep(cfg);
  double peak = 0, at = 0;
  for (double snr : cfg.snr_grid) {
    const double g = improvement(records, "eg", "gg_base", snr);
    if (g > peak) {
      peak = g;
      at = snr;
    }
  }
  const bool pass = peak >= 0.30;
  report(8, pass, fmt("peak eg gain %.1f%% at %g dB (threshold 30%%)", 100 * peak, at));
  CHECK(pass);
}

TEST_CASE("criterion 9: decoder-dvfs-only gain stays marginal") {
  SweepConfig cfg;
  cfg.trials = 1000;
  cfg.seed = 42;
  cfg.snr_grid = {15.0, 30.0};
  cfg.schemes = parse_schemes("gg_dvfs,gg_base");
  const std::vector<TrialRecord> records = run_sweep(cfg);
  const double g15 = improvement(records, "gg_dvfs", "gg_base", 15.0);
  const double g30 = improvement(records, "gg_dvfs", "gg_base", 30.0);
  const bool pass = g15 >= 0.02 && g15 <= 0.10 && g30 >= 0.02 && g30 <= 0.10;
  report(9, pass,
         fmt("decoder-dvfs gain %.1f%% at 15 dB, %.1f%% at 30 dB (window 2-10)", 100 * g15,
             100 * g30));
  CHECK(pass);
}

TEST_CASE("criterion 10: gaeg recovers goodput at high snr") {
  SweepConfig cfg;
  cfg.trials = 1000;
  cfg.seed = 42;
  cfg.snr_grid = {30.0, 35.0};
  cfg.k = 1.05;
  cfg.schemes = parse_schemes("gg,eg,gaeg");
  const std::vector<TrialRecord> records = run_sweep(cfg);
  bool pass = true;
  std::string detail;
  for (double snr : cfg.snr_grid) {
    const double ratio = mean_goodput(records, "gaeg", snr) / mean_goodput(records, "gg", snr);
    const double eta_gap = mean_eta(records, "gaeg", snr) / mean_eta(records, "eg", snr) - 1.0;
    pass = pass && ratio >= 0.90 && eta_gap <= 0.05;
    detail += fmt("%s%g dB: goodput %.1f%% of gg, eta +%.1f%% vs eg", detail.empty() ? "" : "; ",
                  snr, 100 * ratio, 100 * eta_gap);
  }
  report(10, pass, detail + " (need >=90% and <=+5%)");
  CHECK(pass);
}

TEST_CASE("criterion 11: aggregation surface against the baseline") {
  SweepConfig cfg;
  cfg.trials = 1000;
  cfg.seed = 42;
  cfg.snr_grid = parse_snr_grid("8:4:20");
  cfg.scenario = Scenario::Aggregation;
  cfg.l_max_frames = 16;
  cfg.channel.model = ChannelConfig::Model::Selective;
  cfg.channel.rms_delay_ns = 30.0;
  cfg.schemes = parse_schemes("gg,eg,gg_base");

  const auto t0 = Clock::now();
  const std::vector<RecordSet> sets = run_surface(cfg);
  const double seconds = seconds_since(t0);

  double worst_ratio = 0, best_ratio = 1e9;
  for (const SurfaceCell& c : efficiency_surface(sets)) {
    worst_ratio = std::max(worst_ratio, c.ratio);
    best_ratio = std::min(best_ratio, c.ratio);
  }

  // Goodput of the optimized receiver with full aggregation at the top of
  // the snr grid.
  const std::vector<TrialRecord>& full = sets.back().records;
  const double top_snr = cfg.snr_grid.back();
  const double gp_ratio =
      mean_goodput(full, "eg", top_snr) / mean_goodput(full, "gg", top_snr);

  const bool pass = worst_ratio <= 0.90 && best_ratio <= 0.75 && gp_ratio >= 0.85 &&
                    seconds <= 900.0;
  report(11, pass,
         fmt("relative energy %.1f%%..%.1f%% (need <=90, best <=75), eg goodput %.1f%% of gg "
             "at %g dB (need >=85), %.0f s (limit 900)",
             100 * best_ratio, 100 * worst_ratio, 100 * gp_ratio, top_snr, seconds));
  CHECK(pass);
}
