#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "eelink/channel.hpp"
#include "eelink/mode.hpp"

namespace eelink {

struct RankDeficientError : std::runtime_error {
  RankDeficientError() : std::runtime_error("lll_reduce: rank-deficient basis") {}
};

// Post-detection SINR of a linear MMSE equalizer, one value per stream.
// Transmit power 1 is split evenly over the columns of h_sub (Es = 1/n_ss),
// giving SINR_i = 1 / [(Es/sigma^2 H^H H + I)^-1]_ii - 1.
inline std::vector<double> mmse_sinr(const Eigen::MatrixXcd& h_sub, double noise_variance) {
  const int n_ss = static_cast<int>(h_sub.cols());
  if (h_sub.rows() < n_ss) throw std::invalid_argument("mmse_sinr: fewer chains than streams");
  if (!(noise_variance > 0)) throw std::invalid_argument("mmse_sinr: noise variance must be positive");
  const double es = 1.0 / n_ss;
  Eigen::MatrixXcd a = (es / noise_variance) * (h_sub.adjoint() * h_sub);
  a += Eigen::MatrixXcd::Identity(n_ss, n_ss);
  const Eigen::MatrixXcd inv = a.inverse();
  std::vector<double> sinr(n_ss);
  for (int i = 0; i < n_ss; ++i) {
    const double mse = std::max(inv(i, i).real(), 1e-300);
    sinr[i] = std::max(1.0 / mse - 1.0, 0.0);
  }
  return sinr;
}

struct LllResult {
  Eigen::MatrixXcd reduced;    // reduced = input * transform
  Eigen::MatrixXcd transform;  // Gaussian-integer entries, |det| = 1
};

namespace detail {

// Gaussian-integer rounding.
inline std::complex<double> round_c(std::complex<double> z) {
  return {std::round(z.real()), std::round(z.imag())};
}

// Gram-Schmidt coefficients and squared norms of the orthogonalized columns.
inline void gso(const Eigen::MatrixXcd& b, Eigen::MatrixXcd& mu, Eigen::VectorXd& norm2) {
  const int n = static_cast<int>(b.cols());
  Eigen::MatrixXcd star = b;
  mu = Eigen::MatrixXcd::Identity(n, n);
  norm2.resize(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      mu(k, j) = star.col(j).dot(b.col(k)) / norm2(j);
      star.col(k) -= mu(k, j) * star.col(j);
    }
    norm2(k) = star.col(k).squaredNorm();
    if (!(norm2(k) > b.col(k).squaredNorm() * 1e-26)) throw RankDeficientError();
  }
}

}  // namespace detail

// Complex (Gaussian-integer) LLL reduction with the usual delta = 0.75.
// Columns are first sorted by ascending norm; the permutation and all
// subsequent elementary operations are accumulated in a unimodular
// transform T so that reduced = input * T always holds.
inline LllResult lll_reduce(const Eigen::MatrixXcd& basis, double delta = 0.75) {
  const int n = static_cast<int>(basis.cols());
  if (n == 0 || basis.rows() < n) throw RankDeficientError();

  LllResult r;
  r.reduced = basis;
  r.transform = Eigen::MatrixXcd::Identity(n, n);

  // Column pivot: process shorter vectors first.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return basis.col(a).squaredNorm() < basis.col(b).squaredNorm();
  });
  Eigen::MatrixXcd sorted(basis.rows(), n);
  Eigen::MatrixXcd perm = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    sorted.col(i) = basis.col(order[i]);
    perm(order[i], i) = 1.0;
  }
  r.reduced = sorted;
  r.transform = perm;

  Eigen::MatrixXcd mu;
  Eigen::VectorXd norm2;
  detail::gso(r.reduced, mu, norm2);

  int k = 1;
  int guard = 0;
  const int guard_limit = 10000 * (n + 1);
  while (k < n) {
    if (++guard > guard_limit) throw std::runtime_error("lll_reduce: failed to converge");
    // Size-reduce column k against all previous columns.
    for (int j = k - 1; j >= 0; --j) {
      const std::complex<double> q = detail::round_c(mu(k, j));
      if (q != std::complex<double>(0.0, 0.0)) {
        r.reduced.col(k) -= q * r.reduced.col(j);
        r.transform.col(k) -= q * r.transform.col(j);
        for (int t = 0; t < j; ++t) mu(k, t) -= q * mu(j, t);
        mu(k, j) -= q;
      }
    }
    // Lovasz condition between columns k-1 and k.
    const double lhs = norm2(k);
    const double rhs = (delta - std::norm(mu(k, k - 1))) * norm2(k - 1);
    if (lhs >= rhs) {
      ++k;
    } else {
      r.reduced.col(k).swap(r.reduced.col(k - 1));
      r.transform.col(k).swap(r.transform.col(k - 1));
      detail::gso(r.reduced, mu, norm2);
      k = std::max(k - 1, 1);
    }
  }
  return r;
}

// SNR gap applied inside the capped-capacity feasibility rule, one value per
// detector family, exposed through the config file. The soft-output MMSE
// path carries the plain convolutional-code gap; the hard-output
// lattice-reduced path pays extra for the missing reliability information,
// while its reduced basis supplies the robustness on bad channels.
struct OracleGammas {
  double mmse = 2.0;
  double lrald = 2.6;
};

// Per-stream SINRs of the chosen detector for one subcarrier. The LRALD
// path reduces the MMSE-extended matrix [sqrt(Es) H ; sigma I] and reports
// SINRs of the reduced basis directions.
inline std::vector<double> stream_sinrs(Detector det, const Eigen::MatrixXcd& h_sub,
                                        double noise_variance) {
  if (det == Detector::MMSE) return mmse_sinr(h_sub, noise_variance);

  const int n_ss = static_cast<int>(h_sub.cols());
  const double es = 1.0 / n_ss;
  Eigen::MatrixXcd ext(h_sub.rows() + n_ss, n_ss);
  ext.topRows(h_sub.rows()) = std::sqrt(es) * h_sub;
  ext.bottomRows(n_ss) =
      std::sqrt(noise_variance) * Eigen::MatrixXcd::Identity(n_ss, n_ss);
  const LllResult lll = lll_reduce(ext);
  const Eigen::MatrixXcd gram = lll.reduced.adjoint() * lll.reduced;
  const Eigen::MatrixXcd inv = gram.inverse();
  std::vector<double> sinr(n_ss);
  for (int i = 0; i < n_ss; ++i) {
    const double mse = std::max(noise_variance * inv(i, i).real(), 1e-300);
    sinr[i] = std::max(1.0 / mse - 1.0, 0.0);
  }
  return sinr;
}

// Achievable bits for one stream use under the gap approximation, capped by
// the constellation.
inline double capped_bits(double sinr, int bits_per_symbol, double gamma) {
  return std::min(static_cast<double>(bits_per_symbol), std::log2(1.0 + sinr / gamma));
}

struct DetectionReport {
  std::vector<double> per_subcarrier_sinr;  // stream-major within subcarrier
  double mutual_info_bits = 0;              // mean per stream use
  bool feasible = false;
};

// Genie verdict for one (mode, realization) pair: the packet goes through
// exactly when the mean achievable bits per stream use reach Q * R.
inline DetectionReport packet_error_oracle(const SystemMode& mode, const ChannelRealization& ch,
                                           const OracleGammas& gammas = {}) {
  validate(mode);
  if (ch.n_subcarriers() < 1) throw std::invalid_argument("oracle: empty realization");
  const int n_ss = mode.mcs.n_ss;
  const double gamma = mode.detector == Detector::MMSE ? gammas.mmse : gammas.lrald;

  DetectionReport report;
  report.per_subcarrier_sinr.reserve(ch.h.size() * n_ss);
  double bits_sum = 0;
  for (const Eigen::Matrix4cd& full : ch.h) {
    const Eigen::MatrixXcd h_sub = full.topLeftCorner(mode.n_rx, n_ss);
    const std::vector<double> sinr = stream_sinrs(mode.detector, h_sub, ch.noise_variance);
    for (double s : sinr) {
      report.per_subcarrier_sinr.push_back(s);
      bits_sum += capped_bits(s, mode.mcs.bits_per_symbol, gamma);
    }
  }
  report.mutual_info_bits = bits_sum / static_cast<double>(ch.h.size() * n_ss);
  report.feasible =
      report.mutual_info_bits >= mode.mcs.bits_per_symbol * mode.mcs.code_rate();
  return report;
}

// Feasibility of every mode over one realization, sharing SINR work between
// modes that differ only in modulation and code rate and memoizing the
// per-modulation information totals. Results match packet_error_oracle
// exactly.
class ModeOracle {
 public:
  ModeOracle(const ChannelRealization& ch, const OracleGammas& gammas)
      : ch_(&ch), gammas_(gammas) {
    for (auto& det : mi_)
      for (auto& rx : det)
        for (auto& ss : rx) ss.fill(-1.0);
  }

  double mutual_info_bits(const SystemMode& mode) {
    const int d = mode.detector == Detector::MMSE ? 0 : 1;
    double& slot =
        mi_[d][mode.n_rx - 1][mode.mcs.n_ss - 1][q_index(mode.mcs.bits_per_symbol)];
    if (slot < 0) {
      const std::vector<double>& sinrs = sinr_table(mode.detector, mode.n_rx, mode.mcs.n_ss);
      const double gamma = d == 0 ? gammas_.mmse : gammas_.lrald;
      double bits = 0;
      for (double s : sinrs) bits += capped_bits(s, mode.mcs.bits_per_symbol, gamma);
      slot = bits / static_cast<double>(sinrs.size());
    }
    return slot;
  }

  // The payload length does not enter the block-fading genie rule; it is
  // part of the interface so length-aware error models can slot in.
  bool feasible(const SystemMode& mode, long /*payload_bits*/) {
    return mutual_info_bits(mode) >= mode.mcs.bits_per_symbol * mode.mcs.code_rate();
  }

 private:
  static int q_index(int bits_per_symbol) {
    switch (bits_per_symbol) {
      case 1: return 0;
      case 2: return 1;
      case 4: return 2;
      case 6: return 3;
      default: throw std::invalid_argument("oracle: unsupported modulation order");
    }
  }

  std::vector<double>& sinr_table(Detector det, int n_rx, int n_ss) {
    const int d = det == Detector::MMSE ? 0 : 1;
    std::vector<double>& slot = cache_[d][n_rx - 1][n_ss - 1];
    if (slot.empty()) {
      slot.reserve(ch_->h.size() * n_ss);
      for (const Eigen::Matrix4cd& full : ch_->h) {
        const Eigen::MatrixXcd h_sub = full.topLeftCorner(n_rx, n_ss);
        for (double s : stream_sinrs(det, h_sub, ch_->noise_variance)) slot.push_back(s);
      }
    }
    return slot;
  }

  const ChannelRealization* ch_;
  OracleGammas gammas_;
  std::vector<double> cache_[2][4][4];
  std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 2> mi_;
};

}  // namespace eelink
