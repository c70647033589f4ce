#pragma once

#include <complex>
#include <json.hpp>
#include <string>
#include <vector>

#include "spinlab/errors.hpp"

namespace spinlab {

struct TraceMeta {
  std::string protocol;
  nlohmann::json params;   // ClusterParams JSON (or null)
  nlohmann::json options;  // protocol-specific knobs (or null)
};

// Sampled time-domain trace: contrast (or population proxy) on a uniform,
// strictly increasing time grid.
struct Signal {
  std::vector<double> times_us;
  std::vector<double> values;
  TraceMeta meta;

  void validate() const;        // uniform + increasing grid, equal lengths
  double dt() const;            // grid step
  std::size_t size() const { return times_us.size(); }
};

// One-sided spectrum: magnitudes (and the complex bins they came from) on a
// non-negative increasing frequency grid.
struct Spectrum {
  std::vector<double> freqs_mhz;
  std::vector<double> magnitudes;
  std::vector<std::complex<double>> bins;  // optional; empty for lineshapes
  TraceMeta meta;

  void validate() const;
  double bin_width() const;
  std::size_t size() const { return freqs_mhz.size(); }
};

// CSV dialect shared by every tool: comma separator, '.' decimals, LF line
// endings, '#'-prefixed metadata lines (protocol name, then the params and
// options JSON), then one header row naming the columns.
void write_signal_csv(const std::string& path, const Signal& s);
void write_spectrum_csv(const std::string& path, const Spectrum& s);
Signal read_signal_csv(const std::string& path);
Spectrum read_spectrum_csv(const std::string& path);

// Two-column table with the same dialect (Zeeman lines etc.).
void write_table_csv(const std::string& path, const TraceMeta& meta,
                     const std::vector<std::string>& column_names,
                     const std::vector<std::vector<double>>& columns);

std::string format_double(double v);  // shortest round-trippable decimal text

}  // namespace spinlab
