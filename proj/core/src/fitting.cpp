#include "spinlab/fitting.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "spinlab/least_squares.hpp"

namespace spinlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + v.size() / 2;
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

struct RawPeak {
  double freq;
  double height;      // |value - baseline| at the extremum
  double signed_amp;  // value - baseline
  std::size_t bin;
};

// local extrema of |y - baseline|, strongest first, DC bin excluded
std::vector<RawPeak> strongest_extrema(const Spectrum& spec, double baseline,
                                       std::size_t max_count) {
  std::vector<RawPeak> found;
  const auto& y = spec.magnitudes;
  for (std::size_t k = 1; k + 1 < y.size(); ++k) {
    const double d = std::abs(y[k] - baseline);
    if (d >= std::abs(y[k - 1] - baseline) && d >= std::abs(y[k + 1] - baseline) &&
        d > 0.0) {
      found.push_back(RawPeak{spec.freqs_mhz[k], d, y[k] - baseline, k});
    }
  }
  std::sort(found.begin(), found.end(),
            [](const RawPeak& a, const RawPeak& b) { return a.height > b.height; });
  // drop plateau duplicates (adjacent bins of the same feature)
  std::vector<RawPeak> out;
  for (const auto& p : found) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const RawPeak& q) {
      return std::abs(static_cast<long long>(q.bin) - static_cast<long long>(p.bin)) <= 2;
    });
    if (!dup) out.push_back(p);
    if (out.size() == max_count) break;
  }
  return out;
}

}  // namespace

Spectrum compute_fft(const Signal& signal, int zero_pad_factor, Window window) {
  signal.validate();
  if (zero_pad_factor < 1) throw Error("compute_fft: zero_pad_factor must be >= 1");
  const std::size_t n = signal.size();
  if (n < 2) throw GridError("compute_fft: need at least two samples");
  const double dt = signal.dt();

  std::vector<double> data(signal.values);
  double window_sum = static_cast<double>(n);
  if (window == Window::kHann) {
    window_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double w = 0.5 * (1.0 - std::cos(kTwoPi * k / (n - 1)));
      data[k] *= w;
      window_sum += w;
    }
  }

  const std::size_t n_pad = n * static_cast<std::size_t>(zero_pad_factor);
  std::vector<std::complex<double>> in(n_pad, 0.0), out(n_pad);
  for (std::size_t k = 0; k < n; ++k) in[k] = data[k];

  Eigen::FFT<double> fft;
  fft.fwd(out, in);

  Spectrum spec;
  const std::size_t half = n_pad / 2;
  spec.freqs_mhz.reserve(half + 1);
  spec.magnitudes.reserve(half + 1);
  spec.bins.reserve(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    spec.freqs_mhz.push_back(static_cast<double>(k) / (static_cast<double>(n_pad) * dt));
    const std::complex<double> scaled = out[k] / window_sum;
    spec.bins.push_back(scaled);
    spec.magnitudes.push_back((k == 0 ? 1.0 : 2.0) * std::abs(scaled));
  }
  spec.meta = signal.meta;
  return spec;
}

double FitResult::value(const std::string& name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.value;
  }
  throw Error("FitResult: no parameter named '" + name + "'");
}

double FitResult::ci(const std::string& name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.ci95;
  }
  throw Error("FitResult: no parameter named '" + name + "'");
}

nlohmann::json FitResult::to_json() const {
  nlohmann::json jp = nlohmann::json::object();
  for (const auto& p : params) {
    jp[p.name] = {{"value", p.value}, {"ci95", p.ci95}};
  }
  return nlohmann::json{{"params", jp},
                        {"residual", residual_norm},
                        {"converged", converged},
                        {"iterations", iterations}};
}

LorentzianFit fit_lorentzians(const Spectrum& spectrum, int n_peaks,
                              std::optional<PeakSet> init) {
  spectrum.validate();
  if (n_peaks < 1) throw Error("fit_lorentzians: n_peaks must be >= 1");
  const int m = static_cast<int>(spectrum.size());
  const int n_par = 3 * n_peaks + 1;
  if (m < n_par + 1) throw Error("fit_lorentzians: not enough bins for the model");

  const double bin = spectrum.bin_width();
  const double base0 = median(spectrum.magnitudes);

  Eigen::VectorXd x0(n_par);
  if (init) {
    if (static_cast<int>(init->peaks.size()) != n_peaks) {
      throw Error("fit_lorentzians: init size does not match n_peaks");
    }
    for (int i = 0; i < n_peaks; ++i) {
      x0[3 * i] = init->peaks[i].center_mhz;
      x0[3 * i + 1] = init->peaks[i].width_mhz;
      x0[3 * i + 2] = init->peaks[i].amplitude;
    }
    x0[n_par - 1] = base0;
  } else {
    const auto seeds = strongest_extrema(spectrum, base0, n_peaks);
    if (static_cast<int>(seeds.size()) < n_peaks) {
      throw Error("fit_lorentzians: fewer local extrema than requested peaks");
    }
    for (int i = 0; i < n_peaks; ++i) {
      x0[3 * i] = seeds[i].freq;
      x0[3 * i + 1] = 3.0 * bin;
      x0[3 * i + 2] = seeds[i].signed_amp;
    }
    x0[n_par - 1] = base0;
  }

  const auto& fs = spectrum.freqs_mhz;
  const auto& ys = spectrum.magnitudes;
  const auto residuals = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    for (int k = 0; k < m; ++k) {
      double v = x[n_par - 1];
      for (int i = 0; i < n_peaks; ++i) {
        const double df = fs[k] - x[3 * i];
        const double w2 = x[3 * i + 1] * x[3 * i + 1];
        v += x[3 * i + 2] * w2 / (df * df + w2);
      }
      r[k] = v - ys[k];
    }
  };
  const auto jacobian = [&](const Eigen::VectorXd& x, Eigen::MatrixXd& jac) {
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < n_peaks; ++i) {
        const double df = fs[k] - x[3 * i];
        const double w = x[3 * i + 1];
        const double a = x[3 * i + 2];
        const double denom = df * df + w * w;
        const double denom2 = denom * denom;
        jac(k, 3 * i) = a * w * w * 2.0 * df / denom2;
        jac(k, 3 * i + 1) = 2.0 * a * w * df * df / denom2;
        jac(k, 3 * i + 2) = w * w / denom;
      }
      jac(k, n_par - 1) = 1.0;
    }
  };

  const LmResult lm = levenberg_marquardt(residuals, m, x0, jacobian);

  LorentzianFit out;
  out.fit.converged = lm.converged;
  out.fit.iterations = lm.iterations;
  out.fit.residual_norm = std::sqrt(lm.rss);

  std::vector<int> order(n_peaks);
  for (int i = 0; i < n_peaks; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return lm.x[3 * a] < lm.x[3 * b]; });
  for (int rank = 0; rank < n_peaks; ++rank) {
    const int i = order[rank];
    const std::string suffix = std::to_string(rank);
    out.fit.params.push_back({"center" + suffix, lm.x[3 * i], lm.ci95[3 * i]});
    out.fit.params.push_back(
        {"width" + suffix, std::abs(lm.x[3 * i + 1]), lm.ci95[3 * i + 1]});
    out.fit.params.push_back({"amp" + suffix, lm.x[3 * i + 2], lm.ci95[3 * i + 2]});
    out.peaks.peaks.push_back(
        Peak{lm.x[3 * i], std::abs(lm.x[3 * i + 1]), lm.x[3 * i + 2]});
  }
  out.fit.params.push_back({"baseline", lm.x[n_par - 1], lm.ci95[n_par - 1]});
  return out;
}

FitResult fit_damped_sines(const Signal& signal, int n_sines) {
  signal.validate();
  if (n_sines < 1) throw Error("fit_damped_sines: n_sines must be >= 1");
  const int m = static_cast<int>(signal.size());
  const int n_par = 3 * n_sines + 3;  // (a, f, phi) x n + T2 + p + offset
  if (m < n_par + 1) throw Error("fit_damped_sines: not enough samples for the model");

  // seed frequencies from the spectrum (near-DC weight seeds f = 0)
  const Spectrum spec = compute_fft(signal, 4, Window::kNone);
  const double mean =
      std::accumulate(signal.values.begin(), signal.values.end(), 0.0) / m;
  auto seeds = strongest_extrema(spec, 0.0, static_cast<std::size_t>(n_sines) + 2);
  std::erase_if(seeds, [&](const RawPeak& p) { return p.bin == 0; });
  if (static_cast<int>(seeds.size()) > n_sines) seeds.resize(n_sines);

  const double record = signal.times_us.back() - signal.times_us.front();
  Eigen::VectorXd x0(n_par);
  for (int i = 0; i < n_sines; ++i) {
    if (i < static_cast<int>(seeds.size())) {
      x0[3 * i] = seeds[i].height;
      x0[3 * i + 1] = seeds[i].freq;
    } else {
      x0[3 * i] = 0.1;
      x0[3 * i + 1] = 0.0;  // leftover slots seed a slow component
    }
    x0[3 * i + 2] = 0.0;
  }
  x0[n_par - 3] = 2.0 * record;  // T2
  x0[n_par - 2] = 1.0;           // p
  x0[n_par - 1] = mean;

  const auto& ts = signal.times_us;
  const auto& ys = signal.values;
  const auto envelope = [&](double t, double t2, double p) {
    if (t <= 0.0) return 1.0;
    return std::exp(-std::pow(t / std::abs(t2), p));
  };

  const auto residuals = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    const double t2 = x[n_par - 3], p = x[n_par - 2], c = x[n_par - 1];
    for (int k = 0; k < m; ++k) {
      const double env = envelope(ts[k], t2, p);
      double v = c;
      for (int i = 0; i < n_sines; ++i) {
        v += x[3 * i] * std::cos(kTwoPi * x[3 * i + 1] * ts[k] + x[3 * i + 2]) * env;
      }
      r[k] = v - ys[k];
    }
  };
  const auto jacobian = [&](const Eigen::VectorXd& x, Eigen::MatrixXd& jac) {
    const double t2 = x[n_par - 3], p = x[n_par - 2];
    for (int k = 0; k < m; ++k) {
      const double t = ts[k];
      const double env = envelope(t, t2, p);
      const double ratio = t > 0.0 ? std::pow(t / std::abs(t2), p) : 0.0;
      double osc_sum = 0.0;
      for (int i = 0; i < n_sines; ++i) {
        const double arg = kTwoPi * x[3 * i + 1] * t + x[3 * i + 2];
        const double cosv = std::cos(arg), sinv = std::sin(arg);
        jac(k, 3 * i) = cosv * env;
        jac(k, 3 * i + 1) = -x[3 * i] * sinv * kTwoPi * t * env;
        jac(k, 3 * i + 2) = -x[3 * i] * sinv * env;
        osc_sum += x[3 * i] * cosv;
      }
      jac(k, n_par - 3) = osc_sum * env * p * ratio / std::abs(t2);
      jac(k, n_par - 2) =
          t > 0.0 && t != std::abs(t2)
              ? -osc_sum * env * ratio * std::log(t / std::abs(t2))
              : 0.0;
      jac(k, n_par - 1) = 1.0;
    }
  };

  const LmResult lm = levenberg_marquardt(residuals, m, x0, jacobian);

  FitResult out;
  out.converged = lm.converged;
  out.iterations = lm.iterations;
  out.residual_norm = std::sqrt(lm.rss);

  std::vector<int> order(n_sines);
  for (int i = 0; i < n_sines; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(lm.x[3 * a + 1]) < std::abs(lm.x[3 * b + 1]);
  });
  for (int rank = 0; rank < n_sines; ++rank) {
    const int i = order[rank];
    const std::string suffix = std::to_string(rank);
    out.params.push_back({"amp" + suffix, lm.x[3 * i], lm.ci95[3 * i]});
    out.params.push_back({"freq" + suffix, std::abs(lm.x[3 * i + 1]), lm.ci95[3 * i + 1]});
    out.params.push_back({"phase" + suffix, lm.x[3 * i + 2], lm.ci95[3 * i + 2]});
  }
  out.params.push_back({"t2", std::abs(lm.x[n_par - 3]), lm.ci95[n_par - 3]});
  out.params.push_back({"p", lm.x[n_par - 2], lm.ci95[n_par - 2]});
  out.params.push_back({"offset", lm.x[n_par - 1], lm.ci95[n_par - 1]});
  return out;
}

RangeReport propagate_ranges(const std::vector<FitResult>& repeated_fits,
                             double bin_width_mhz) {
  if (repeated_fits.size() < 2) {
    throw Error("propagate_ranges: need at least two fits");
  }
  // per fit, gather the frequency-like parameters (Lorentzian centers or
  // damped-sine frequencies), ascending
  std::vector<std::vector<FitParam>> per_fit;
  for (const auto& fit : repeated_fits) {
    std::vector<FitParam> freqs;
    for (const auto& p : fit.params) {
      if (p.name.rfind("center", 0) == 0 || p.name.rfind("freq", 0) == 0) {
        freqs.push_back(p);
      }
    }
    if (freqs.empty()) throw Error("propagate_ranges: fit has no frequency parameters");
    std::sort(freqs.begin(), freqs.end(),
              [](const FitParam& a, const FitParam& b) { return a.value < b.value; });
    per_fit.push_back(std::move(freqs));
  }
  const std::size_t n_comp = per_fit.front().size();
  for (const auto& f : per_fit) {
    if (f.size() != n_comp) {
      throw Error("propagate_ranges: fits disagree on the number of components");
    }
  }

  RangeReport report;
  for (std::size_t i = 0; i < n_comp; ++i) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& f : per_fit) {
      const double ci = f[i].ci95 + bin_width_mhz / 2.0;
      hi = std::max(hi, f[i].value + ci);
      lo = std::min(lo, f[i].value - ci);
    }
    report.ranges.push_back(hi - lo);
  }
  const std::size_t used = std::min<std::size_t>(2, report.ranges.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < used; ++i) acc += report.ranges[i];
  report.parameter_error = acc / used / (2.0 * std::sqrt(2.0));
  return report;
}

Signal inject_noise(const Signal& signal, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw Error("inject_noise: sigma must be >= 0");
  Signal out = signal;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  const auto uniform01 = [&rng]() {
    // (0, 1]: top 53 bits, never zero
    return (static_cast<double>(rng() >> 11) + 1.0) / 9007199254740993.0;
  };
  bool have_spare = false;
  double spare = 0.0;
  for (double& v : out.values) {
    double z;
    if (have_spare) {
      z = spare;
      have_spare = false;
    } else {
      const double u1 = uniform01();
      const double u2 = uniform01();
      const double radius = std::sqrt(-2.0 * std::log(u1));
      z = radius * std::cos(kTwoPi * u2);
      spare = radius * std::sin(kTwoPi * u2);
      have_spare = true;
    }
    v += sigma * z;
  }
  return out;
}

InterpolatedPeak interpolated_peak(const Spectrum& spectrum, double f_guess_mhz,
                                   int window_bins) {
  const double bin = spectrum.bin_width();
  const long long k0 = std::llround((f_guess_mhz - spectrum.freqs_mhz.front()) / bin);
  const long long lo = std::max<long long>(1, k0 - window_bins);
  const long long hi =
      std::min<long long>(static_cast<long long>(spectrum.size()) - 2, k0 + window_bins);
  InterpolatedPeak best;
  for (long long k = lo; k <= hi; ++k) {
    const double y = spectrum.magnitudes[k];
    if (y >= spectrum.magnitudes[k - 1] && y >= spectrum.magnitudes[k + 1] &&
        (!best.found || y > best.magnitude)) {
      const double a = spectrum.magnitudes[k - 1];
      const double b = y;
      const double c = spectrum.magnitudes[k + 1];
      const double den = a - 2.0 * b + c;
      const double shift = std::abs(den) > 1e-300 ? 0.5 * (a - c) / den : 0.0;
      best.freq_mhz = spectrum.freqs_mhz[k] + shift * bin;
      best.magnitude = b - 0.25 * (a - c) * shift;
      best.found = true;
    }
  }
  return best;
}

}  // namespace spinlab
