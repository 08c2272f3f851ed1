#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "eelink/rng.hpp"

namespace eelink {

// Subcarrier spacing of the 40 MHz layout (128-point grid) and the tap
// spacing of the delay-line channel model.
inline constexpr double kSubcarrierSpacingHz = 312.5e3;
inline constexpr double kTapSpacingS = 10e-9;

// One block-fading draw: a full 4x4 matrix per subcarrier plus the noise
// power. Modes with fewer active chains or streams use the leading
// rows/columns.
struct ChannelRealization {
  std::vector<Eigen::Matrix4cd> h;
  double noise_variance = 1.0;

  int n_subcarriers() const { return static_cast<int>(h.size()); }
};

// Unit-variance channel entries and unit total transmit power make
// snr_db = -10 log10(noise_variance).
inline double noise_variance_from_snr_db(double snr_db) {
  if (!std::isfinite(snr_db)) throw std::invalid_argument("snr_db must be finite");
  return std::pow(10.0, -snr_db / 10.0);
}

// Flat Rayleigh block fading: one i.i.d. CN(0,1) matrix for the whole band.
inline ChannelRealization draw_flat(std::uint64_t seed, std::uint64_t trial, double snr_db) {
  TrialRng rng(seed, trial);
  ChannelRealization ch;
  ch.noise_variance = noise_variance_from_snr_db(snr_db);
  Eigen::Matrix4cd m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = rng.complex_gaussian();
  ch.h.push_back(m);
  return ch;
}

// Exponential power-delay profile, unit total power. Tap l sits at l * 10 ns.
inline std::vector<double> exponential_pdp(double rms_delay_ns) {
  if (!(rms_delay_ns > 0)) throw std::invalid_argument("rms_delay_ns must be positive");
  const int n_taps = std::max(1, std::min(128, static_cast<int>(std::ceil(8.0 * rms_delay_ns / 10.0))));
  std::vector<double> p(n_taps);
  double total = 0;
  for (int l = 0; l < n_taps; ++l) {
    p[l] = std::exp(-(l * kTapSpacingS) / (rms_delay_ns * 1e-9));
    total += p[l];
  }
  for (double& v : p) v /= total;
  return p;
}

// Random tap matrices for one realization, i.i.d. across antenna pairs,
// scaled so the summed tap power per entry is one.
inline std::vector<Eigen::Matrix4cd> draw_taps(std::uint64_t seed, std::uint64_t trial,
                                               double rms_delay_ns) {
  const std::vector<double> pdp = exponential_pdp(rms_delay_ns);
  TrialRng rng(seed, trial);
  std::vector<Eigen::Matrix4cd> taps(pdp.size());
  for (std::size_t l = 0; l < pdp.size(); ++l) {
    const double amp = std::sqrt(pdp[l]);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) taps[l](i, j) = amp * rng.complex_gaussian();
  }
  return taps;
}

// Tone indices relative to DC. A single subcarrier degenerates to DC; wider
// layouts straddle DC symmetrically and skip it, as in the 108-tone 40 MHz
// grid.
inline std::vector<int> subcarrier_indices(int n_subcarriers) {
  if (n_subcarriers < 1) throw std::invalid_argument("n_subcarriers must be at least 1");
  std::vector<int> idx;
  if (n_subcarriers == 1) {
    idx.push_back(0);
    return idx;
  }
  const int lo = n_subcarriers / 2;
  for (int k = -lo; k <= -1; ++k) idx.push_back(k);
  for (int k = 1; k <= n_subcarriers - lo; ++k) idx.push_back(k);
  return idx;
}

// Per-subcarrier frequency response of a tapped delay line:
// H_k = sum_l g_l exp(-j 2 pi f_k tau_l).
inline ChannelRealization taps_to_frequency(const std::vector<Eigen::Matrix4cd>& taps,
                                            double snr_db, int n_subcarriers) {
  ChannelRealization ch;
  ch.noise_variance = noise_variance_from_snr_db(snr_db);
  const std::vector<int> tones = subcarrier_indices(n_subcarriers);
  ch.h.resize(tones.size());
  for (std::size_t k = 0; k < tones.size(); ++k) {
    const double f = tones[k] * kSubcarrierSpacingHz;
    Eigen::Matrix4cd sum = Eigen::Matrix4cd::Zero();
    for (std::size_t l = 0; l < taps.size(); ++l) {
      const double phase = -2.0 * M_PI * f * (static_cast<double>(l) * kTapSpacingS);
      sum += taps[l] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    ch.h[k] = sum;
  }
  return ch;
}

// Frequency-selective Rayleigh fading with an exponential delay profile.
inline ChannelRealization draw_selective(std::uint64_t seed, std::uint64_t trial, double snr_db,
                                         double rms_delay_ns, int n_subcarriers = 108) {
  return taps_to_frequency(draw_taps(seed, trial, rms_delay_ns), snr_db, n_subcarriers);
}

}  // namespace eelink
