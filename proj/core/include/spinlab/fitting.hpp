#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinlab/signal.hpp"

// Spectral estimation and model fitting: FFT, multi-Lorentzian fits of
// magnitude spectra, damped multi-sine fits of time traces, the repeated-run
// range rule, and seeded noise injection for fit validation.
namespace spinlab {

enum class Window { kNone, kHann };

// One-sided magnitude spectrum. Bin width is 1/(pad*N*dt); the signal mean
// lands in bin 0. Magnitudes are scaled so a unit cosine peaks near 1 and
// the DC bin holds the mean.
Spectrum compute_fft(const Signal& signal, int zero_pad_factor = 4,
                     Window window = Window::kNone);

struct Peak {
  double center_mhz = 0.0;
  double width_mhz = 0.0;  // Lorentzian half-width at half-maximum
  double amplitude = 0.0;  // signed height
};

struct PeakSet {
  std::vector<Peak> peaks;  // sorted by center
};

struct FitParam {
  std::string name;
  double value = 0.0;
  double ci95 = 0.0;
};

struct FitResult {
  std::vector<FitParam> params;
  double residual_norm = 0.0;  // sqrt(rss)
  bool converged = false;
  int iterations = 0;

  double value(const std::string& name) const;
  double ci(const std::string& name) const;
  nlohmann::json to_json() const;
};

struct LorentzianFit {
  FitResult fit;
  PeakSet peaks;
};

// Least squares of sum_i a_i w_i^2/((f-c_i)^2 + w_i^2) + baseline. Signed
// amplitudes handle dips as well as peaks. Auto-init picks the n strongest
// local extrema relative to the median baseline (parabolic-interpolated).
// Non-convergence is flagged on the result, not thrown.
LorentzianFit fit_lorentzians(const Spectrum& spectrum, int n_peaks,
                              std::optional<PeakSet> init = {});

// Least squares of [sum_i a_i cos(2 pi f_i t + phi_i)] exp(-(t/T2)^p) + c.
// Frequency seeds come from compute_fft peaks (near-DC content seeds a
// zero-frequency component).
FitResult fit_damped_sines(const Signal& signal, int n_sines);

struct RangeReport {
  std::vector<double> ranges;  // per frequency component, ascending order
  double parameter_error = 0.0;  // mean of the first two ranges / (2 sqrt 2)
};

// Repeated-run spread rule: for each component, range = max(value + ci) -
// min(value - ci) over the runs, with half the spectral bin added to every
// CI first. Components are matched across fits by ascending center
// frequency. parameter_error applies the fixed /(2 sqrt 2) conversion.
RangeReport propagate_ranges(const std::vector<FitResult>& repeated_fits,
                             double bin_width_mhz);

// Adds i.i.d. Gaussian noise, deterministic per seed (Box-Muller over
// mt19937 so bytes are stable across standard libraries).
Signal inject_noise(const Signal& signal, double sigma, std::uint64_t seed);

// Largest interpolated local maximum within +-window_bins of f_guess.
// Returns {center, magnitude}; used for peak-pair amplitude comparisons.
struct InterpolatedPeak {
  double freq_mhz = 0.0;
  double magnitude = 0.0;
  bool found = false;
};
InterpolatedPeak interpolated_peak(const Spectrum& spectrum, double f_guess_mhz,
                                   int window_bins);

}  // namespace spinlab
