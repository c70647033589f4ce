#include "spinlab/signal.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace spinlab {

namespace {

void check_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                bool require_uniform, const char* what) {
  if (xs.size() != ys.size()) {
    throw GridError(std::string(what) + ": grid and values must have equal length");
  }
  if (xs.size() < 2) return;
  const double step = xs[1] - xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double d = xs[i] - xs[i - 1];
    if (d <= 0.0) {
      throw GridError(std::string(what) + ": grid must be strictly increasing");
    }
    if (require_uniform && std::abs(d - step) > 1e-9 * std::max(1.0, std::abs(step))) {
      throw GridError(std::string(what) + ": grid must be uniform");
    }
  }
}

void write_meta(std::ostream& os, const TraceMeta& meta) {
  os << "# " << (meta.protocol.empty() ? "spinlab" : meta.protocol) << "\n";
  os << "# params: " << (meta.params.is_null() ? nlohmann::json::object() : meta.params).dump()
     << "\n";
  if (!meta.options.is_null() && !meta.options.empty()) {
    os << "# options: " << meta.options.dump() << "\n";
  }
}

TraceMeta read_meta(std::istream& is, std::string& first_data_line) {
  TraceMeta meta;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') {
      first_data_line = line;
      break;
    }
    std::string body = line.substr(1);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    body = strip(body);
    if (body.rfind("params:", 0) == 0) {
      meta.params = nlohmann::json::parse(body.substr(7), nullptr, false);
      if (meta.params.is_discarded()) meta.params = nullptr;
    } else if (body.rfind("options:", 0) == 0) {
      meta.options = nlohmann::json::parse(body.substr(8), nullptr, false);
      if (meta.options.is_discarded()) meta.options = nullptr;
    } else if (meta.protocol.empty()) {
      meta.protocol = body;
    }
  }
  return meta;
}

struct Table {
  TraceMeta meta;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};

Table read_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::string header;
  Table t;
  t.meta = read_meta(is, header);
  if (header.empty()) throw IoError(path + ": no data");
  std::stringstream hs(header);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.names.push_back(cell);
  if (t.names.empty()) throw IoError(path + ": empty header row");
  t.columns.resize(t.names.size());
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ls(line);
    std::size_t col = 0;
    while (std::getline(ls, cell, ',')) {
      if (col >= t.columns.size()) throw IoError(path + ": ragged row");
      try {
        t.columns[col].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError(path + ": bad number '" + cell + "'");
      }
      ++col;
    }
    if (col != t.columns.size()) throw IoError(path + ": ragged row");
  }
  if (t.columns[0].empty()) throw IoError(path + ": no data rows");
  return t;
}

// write-temp-then-rename so partial output never lands at the target path
void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw IoError("cannot open " + tmp + " for writing");
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void Signal::validate() const { check_grid(times_us, values, true, "Signal"); }

double Signal::dt() const {
  if (times_us.size() < 2) throw GridError("Signal: need at least two samples");
  return times_us[1] - times_us[0];
}

void Spectrum::validate() const {
  check_grid(freqs_mhz, magnitudes, false, "Spectrum");
  if (!freqs_mhz.empty() && freqs_mhz.front() < 0.0) {
    throw GridError("Spectrum: frequencies must be non-negative");
  }
}

double Spectrum::bin_width() const {
  if (freqs_mhz.size() < 2) throw GridError("Spectrum: need at least two bins");
  return freqs_mhz[1] - freqs_mhz[0];
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_table_csv(const std::string& path, const TraceMeta& meta,
                     const std::vector<std::string>& column_names,
                     const std::vector<std::vector<double>>& columns) {
  std::ostringstream os;
  write_meta(os, meta);
  for (std::size_t i = 0; i < column_names.size(); ++i) {
    os << (i ? "," : "") << column_names[i];
  }
  os << "\n";
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      os << (c ? "," : "") << format_double(columns[c][r]);
    }
    os << "\n";
  }
  atomic_write(path, os.str());
}

void write_signal_csv(const std::string& path, const Signal& s) {
  s.validate();
  write_table_csv(path, s.meta, {"time_us", "contrast"}, {s.times_us, s.values});
}

void write_spectrum_csv(const std::string& path, const Spectrum& s) {
  s.validate();
  write_table_csv(path, s.meta, {"freq_mhz", "magnitude"}, {s.freqs_mhz, s.magnitudes});
}

Signal read_signal_csv(const std::string& path) {
  Table t = read_table(path);
  if (t.columns.size() < 2) throw IoError(path + ": expected two columns");
  Signal s{std::move(t.columns[0]), std::move(t.columns[1]), std::move(t.meta)};
  s.validate();
  return s;
}

Spectrum read_spectrum_csv(const std::string& path) {
  Table t = read_table(path);
  if (t.columns.size() < 2) throw IoError(path + ": expected two columns");
  Spectrum s{std::move(t.columns[0]), std::move(t.columns[1]), {}, std::move(t.meta)};
  s.validate();
  return s;
}

}  // namespace spinlab
