// spinlab: batch front-end for the three-spin cluster simulator.
//   spinlab simulate --config cluster.json --protocol sedor --out sedor.csv
//   spinlab analyze  --input sedor.csv --mode extract --esr-splitting 1.67
//   spinlab analytic --config cluster.json
//   spinlab figures  3b --out-dir figs/
// Exit codes: 0 ok, 2 bad config/input, 3 Nyquist violation, 4 fit did not
// converge (partial JSON still written).

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "spinlab/constants.hpp"
#include "spinlab/experiments.hpp"
#include "spinlab/fitting.hpp"
#include "spinlab/sedor_model.hpp"
#include "spinlab/signal.hpp"

namespace {

using nlohmann::json;
using namespace spinlab;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitNyquist = 3;
constexpr int kExitNoConvergence = 4;

struct Sweep {
  double start = 0.0;
  double stop = 0.0;
  int n_points = 0;
};

std::vector<double> make_grid(const Sweep& s) {
  if (s.n_points < 2) throw Error("sweep: n_points must be >= 2");
  if (!(s.start < s.stop)) throw Error("sweep: start must be < stop");
  std::vector<double> g(s.n_points);
  const double step = (s.stop - s.start) / s.n_points;  // endpoint-exclusive
  for (int i = 0; i < s.n_points; ++i) g[i] = s.start + step * i;
  return g;
}

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  json j = json::parse(is, nullptr, false);
  if (j.is_discarded()) throw IoError(path + ": invalid JSON");
  return j;
}

// A config file is either a full run config ({"params": {...}, ...}) or a
// bare ClusterParams object.
struct RunConfig {
  ClusterParams params;
  std::string protocol;
  std::optional<Sweep> sweep;
  json options = json::object();
};

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  if (j.contains("params")) {
    cfg.params = j.at("params").get<ClusterParams>();
    cfg.protocol = j.value("protocol", "");
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      cfg.sweep = Sweep{s.at("start").get<double>(), s.at("stop").get<double>(),
                        s.at("n_points").get<int>()};
    }
    if (j.contains("options")) cfg.options = j.at("options");
  } else {
    cfg.params = j.get<ClusterParams>();
  }
  return cfg;
}

Sweep default_sweep(const std::string& protocol, const ClusterParams& p) {
  const double f0 = constants::kGammaEMhzPerGauss * p.b0_gauss;
  if (protocol == "sedor" || protocol == "polarization_transfer") return {0.0, 20.0, 512};
  if (protocol == "nv_esr") return {-3.0, 3.0, 301};
  if (protocol == "deer_esr") return {f0 - 6.0, f0 + 6.0, 241};
  if (protocol == "hartmann_hahn") return {0.0, 4.0, 401};
  if (protocol == "deer_rabi" || protocol == "nv_rabi") return {0.0, 1.0, 512};
  if (protocol == "zeeman") return {0.0, 700.0, 141};
  throw Error("unknown protocol '" + protocol + "'");
}

int run_simulate(const RunConfig& cfg, const std::string& out_path) {
  const auto& opt = cfg.options;
  const Sweep sweep = cfg.sweep.value_or(default_sweep(cfg.protocol, cfg.params));
  const std::vector<double> grid = make_grid(sweep);
  const double noise_sigma = opt.value("noise_sigma", 0.0);
  const std::uint64_t seed = opt.value("seed", std::uint64_t{1});

  const auto finish_signal = [&](Signal s) {
    if (noise_sigma > 0.0) {
      s = inject_noise(s, noise_sigma, seed);
      s.meta.options["noise_sigma"] = noise_sigma;
      s.meta.options["seed"] = seed;
    }
    write_signal_csv(out_path, s);
  };

  if (cfg.protocol == "sedor") {
    SedorOptions so;
    if (opt.contains("tppi_nu_mhz")) so.tppi_nu_mhz = opt.at("tppi_nu_mhz").get<double>();
    if (opt.contains("t2_us")) so.t2_us = opt.at("t2_us").get<double>();
    so.p = opt.value("p", 1.0);
    if (opt.contains("ds_rabi_mhz")) so.ds_rabi_mhz = opt.at("ds_rabi_mhz").get<double>();
    so.ds_carrier_offset_mhz = opt.value("ds_carrier_offset_mhz", 0.0);
    finish_signal(run_sedor(cfg.params, grid, so));
  } else if (cfg.protocol == "nv_esr") {
    write_spectrum_csv(out_path,
                       run_nv_esr(cfg.params, grid, opt.value("probe_rabi_mhz", 0.25)));
  } else if (cfg.protocol == "deer_esr") {
    write_spectrum_csv(out_path,
                       run_deer_esr(cfg.params, grid, opt.value("tau_us", 3.0),
                                    opt.value("ds_rabi_mhz", 13.0)));
  } else if (cfg.protocol == "hartmann_hahn") {
    finish_signal(run_hartmann_hahn(cfg.params, grid, opt.value("rabi_mhz", 13.0),
                                    opt.value("hh_detuning_mhz", 0.0)));
  } else if (cfg.protocol == "polarization_transfer") {
    write_spectrum_csv(
        out_path,
        run_polarization_transfer(cfg.params, opt.value("spinlock_us", 0.7),
                                  opt.value("nv_phase_rad", 0.0), grid,
                                  opt.value("tppi_nu_mhz", 1.25),
                                  opt.value("rabi_mhz", 13.0),
                                  opt.value("zero_pad_factor", 4)));
  } else if (cfg.protocol == "deer_rabi") {
    finish_signal(run_deer_rabi(cfg.params, grid, opt.value("ds_rabi_mhz", 13.3),
                                opt.value("tau_us", 3.0)));
  } else if (cfg.protocol == "nv_rabi") {
    finish_signal(run_nv_rabi(cfg.params, grid, opt.value("drive_field_mhz", 13.0)));
  } else if (cfg.protocol == "zeeman") {
    const ZeemanLines lines =
        run_zeeman_scan(grid, opt.value("zfs_mhz", constants::kNvZfsMhz));
    json pj;
    to_json(pj, cfg.params);
    write_table_csv(out_path, TraceMeta{"zeeman", pj, json::object()},
                    {"b0_gauss", "nv_mhz", "ds_mhz"},
                    {lines.b0_gauss, lines.nv_mhz, lines.ds_mhz});
  } else {
    throw Error("unknown protocol '" + cfg.protocol + "'");
  }
  return kExitOk;
}

Window parse_window(const std::string& name) {
  if (name == "none") return Window::kNone;
  if (name == "hann") return Window::kHann;
  throw Error("unknown window '" + name + "'");
}

void write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw IoError("cannot open " + tmp);
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

int run_analyze(const std::string& input, const std::string& mode, const json& opt,
                const std::string& out_path) {
  const int pad = opt.value("zero_pad_factor", 4);
  const Window window = parse_window(opt.value("window", std::string("none")));

  if (mode == "fft") {
    const Signal sig = read_signal_csv(input);
    write_spectrum_csv(out_path, compute_fft(sig, pad, window));
    return kExitOk;
  }

  if (mode == "lorentz") {
    const Spectrum spec = read_spectrum_csv(input);
    const LorentzianFit res = fit_lorentzians(spec, opt.value("n_peaks", 3));
    write_text(out_path, res.fit.to_json().dump(2) + "\n");
    return res.fit.converged ? kExitOk : kExitNoConvergence;
  }

  if (mode == "sines") {
    const Signal sig = read_signal_csv(input);
    const FitResult res = fit_damped_sines(sig, opt.value("n_sines", 4));
    write_text(out_path, res.to_json().dump(2) + "\n");
    return res.converged ? kExitOk : kExitNoConvergence;
  }

  if (mode == "extract") {
    // chain: fft -> 3-Lorentzian fit -> parameter inversion
    const Signal sig = read_signal_csv(input);
    const Spectrum spec = compute_fft(sig, pad, window);
    const LorentzianFit lor = fit_lorentzians(spec, 3);

    double splitting = 0.0;
    ValueCi splitting_ci{0.0, 0.0};
    if (opt.contains("esr_splitting_mhz")) {
      splitting = opt.at("esr_splitting_mhz").get<double>();
    } else if (opt.contains("esr_csv")) {
      const Spectrum esr = read_spectrum_csv(opt.at("esr_csv").get<std::string>());
      const LorentzianFit efit = fit_lorentzians(esr, 3);
      if (!efit.fit.converged) return kExitNoConvergence;
      splitting = efit.peaks.peaks.back().center_mhz - efit.peaks.peaks.front().center_mhz;
      splitting_ci.ci95 = std::hypot(efit.fit.ci("center0"), efit.fit.ci("center2"));
    } else {
      throw Error("extract needs --esr-splitting or --esr-csv");
    }

    // fitted centers are the half-frequencies D_i/2, ascending
    const double half_bin = spec.bin_width() / 2.0;
    const double d1 = 2.0 * lor.fit.value("center0");
    const double d2 = 2.0 * lor.fit.value("center2");
    const ValueCi d1_ci{d1, 2.0 * (lor.fit.ci("center0") + half_bin)};
    const ValueCi d2_ci{d2, 2.0 * (lor.fit.ci("center2") + half_bin)};
    const ExtractedParams ex = extract_cluster_params(
        d1, d2, splitting, opt.value("d4_bound_mhz", 0.10), d1_ci, d2_ci, splitting_ci);

    json j;
    j["delta1_mhz"] = {{"value", d1}, {"ci95", d1_ci.ci95}};
    j["delta2_mhz"] = {{"value", d2}, {"ci95", d2_ci.ci95}};
    j["esr_splitting_mhz"] = {{"value", splitting}, {"ci95", splitting_ci.ci95}};
    j["j12_abs_mhz"] = {{"value", ex.j12_abs.value}, {"ci95", ex.j12_abs.ci95}};
    j["delta_omega_mhz"] = {{"value", ex.delta_omega.value}, {"ci95", ex.delta_omega.ci95}};
    j["a_diff_mhz"] = {{"value", ex.a_diff.value}, {"ci95", ex.a_diff.ci95}};
    j["a1_mhz"] = {{"value", ex.a1.value}, {"ci95", ex.a1.ci95}};
    j["a2_mhz"] = {{"value", ex.a2.value}, {"ci95", ex.a2.ci95}};
    j["a_sum_bound_mhz"] = ex.a_sum_bound;
    j["discarded_branches"] = ex.discarded_branches;
    j["converged"] = lor.fit.converged;
    write_text(out_path, j.dump(2) + "\n");
    return lor.fit.converged ? kExitOk : kExitNoConvergence;
  }

  throw Error("unknown analyze mode '" + mode + "'");
}

int run_analytic(const ClusterParams& params, const std::string& out_path) {
  const SedorModel m = sedor_model(params);
  const SedorAmplitudes norm = normalized_to_d1(m.amps);
  const EsrSplittings esr = esr_splittings(params);
  json j;
  j["delta1_mhz"] = m.freqs.delta1;
  j["delta2_mhz"] = m.freqs.delta2;
  j["delta3_mhz"] = m.freqs.delta3;
  j["delta4_mhz"] = m.freqs.delta4;
  j["gamma"] = m.gamma;
  j["amplitudes"] = {{"dc", m.amps.dc},   {"d1_half", m.amps.d1},
                     {"d2_half", m.amps.d2}, {"d3_half", m.amps.d3},
                     {"sum_half", m.amps.sum}, {"d4_half", m.amps.d4}};
  j["amplitudes_normalized"] = {{"dc", norm.dc},   {"d1_half", norm.d1},
                                {"d2_half", norm.d2}, {"d3_half", norm.d3},
                                {"sum_half", norm.sum}, {"d4_half", norm.d4}};
  j["esr_outer_mhz"] = esr.outer;
  j["esr_inner_mhz"] = esr.inner;
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
  return kExitOk;
}

// ---- figures ---------------------------------------------------------------

std::string gnuplot_header(const std::string& name) {
  return "set datafile separator ','\nset grid\nset title '" + name + "'\n";
}

int run_figures(const std::string& figure_id, const std::string& out_dir) {
  const ClusterParams params = default_cluster();
  std::filesystem::create_directories(out_dir);
  const auto path = [&](const std::string& leaf) { return out_dir + "/" + leaf; };

  if (figure_id == "2a") {
    Sweep sweep{-3.0, 3.0, 301};
    const Spectrum esr = run_nv_esr(params, make_grid(sweep));
    const LorentzianFit fit = fit_lorentzians(esr, 3);
    // overlay the fitted model on the same grid
    std::vector<double> model(esr.size());
    for (std::size_t k = 0; k < esr.size(); ++k) {
      double v = fit.fit.value("baseline");
      for (const auto& p : fit.peaks.peaks) {
        const double df = esr.freqs_mhz[k] - p.center_mhz;
        v += p.amplitude * p.width_mhz * p.width_mhz /
             (df * df + p.width_mhz * p.width_mhz);
      }
      model[k] = v;
    }
    write_table_csv(path("fig2a.csv"), esr.meta,
                    {"offset_mhz", "population", "lorentz_fit"},
                    {esr.freqs_mhz, esr.magnitudes, model});
    write_text(path("fig2a.gp"),
               gnuplot_header("NV ESR triplet") +
                   "set xlabel 'drive offset (MHz)'\nset ylabel '|0> population'\n"
                   "plot 'fig2a.csv' using 1:2 with points pt 7 title 'simulated', \\\n"
                   "     'fig2a.csv' using 1:3 with lines lw 2 title '3-Lorentzian fit'\n");
    return kExitOk;
  }
  if (figure_id == "2b") {
    const double f0 = constants::kGammaEMhzPerGauss * params.b0_gauss;
    const Spectrum deer = run_deer_esr(params, make_grid({f0 - 8.0, f0 + 8.0, 321}), 3.0);
    write_spectrum_csv(path("fig2b.csv"), deer);
    write_text(path("fig2b.gp"),
               gnuplot_header("DEER ESR lineshape") +
                   "set xlabel 'dark-spin drive (MHz)'\nset ylabel 'echo contrast'\n"
                   "plot 'fig2b.csv' using 1:2 with linespoints pt 6 title 'simulated'\n");
    return kExitOk;
  }
  if (figure_id == "3b") {
    SedorOptions so;
    so.t2_us = 14.0;
    so.p = 1.1;
    const Signal sedor = run_sedor(params, make_grid({0.0, 20.0, 512}), so);
    const FitResult fit = fit_damped_sines(sedor, 4);
    std::vector<double> model(sedor.size());
    const double t2 = fit.value("t2"), pexp = fit.value("p"), c = fit.value("offset");
    for (std::size_t k = 0; k < sedor.size(); ++k) {
      const double t = sedor.times_us[k];
      const double env = t > 0.0 ? std::exp(-std::pow(t / t2, pexp)) : 1.0;
      double v = c;
      for (int i = 0; i < 4; ++i) {
        const std::string s = std::to_string(i);
        v += fit.value("amp" + s) *
             std::cos(2.0 * std::numbers::pi * fit.value("freq" + s) * t +
                      fit.value("phase" + s)) *
             env;
      }
      model[k] = v;
    }
    write_table_csv(path("fig3b.csv"), sedor.meta,
                    {"tau_us", "contrast", "four_sine_fit"},
                    {sedor.times_us, sedor.values, model});
    write_text(path("fig3b.gp"),
               gnuplot_header("SEDOR time trace") +
                   "set xlabel 'free precession time (us)'\nset ylabel 'contrast'\n"
                   "plot 'fig3b.csv' using 1:2 with points pt 7 title 'simulated', \\\n"
                   "     'fig3b.csv' using 1:3 with lines lw 2 title '4-sine fit'\n");
    return kExitOk;
  }
  if (figure_id == "3c") {
    SedorOptions so;
    so.tppi_nu_mhz = 1.25;
    const Signal sedor = run_sedor(params, make_grid({0.0, 20.0, 512}), so);
    const Spectrum spec = compute_fft(sedor, 4, Window::kNone);
    write_spectrum_csv(path("fig3c.csv"), spec);
    const SedorFrequencies f = sedor_frequencies(params);
    std::string gp = gnuplot_header("SEDOR spectrum with phase modulation") +
                     "set xlabel 'frequency (MHz)'\nset ylabel '|FFT|'\nset xrange [0:2.6]\n";
    for (double d : {f.delta1, f.delta2, f.delta3}) {
      for (double sgn : {-1.0, 1.0}) {
        gp += "set arrow from " + format_double(1.25 + sgn * d / 2.0) +
              ",graph 0 to " + format_double(1.25 + sgn * d / 2.0) +
              ",graph 1 nohead lc 'red' dt 2\n";
      }
    }
    gp += "plot 'fig3c.csv' using 1:2 with lines lw 2 title 'TPPI spectrum'\n";
    write_text(path("fig3c.gp"), gp);
    return kExitOk;
  }
  if (figure_id == "4a") {
    const Signal hh = run_hartmann_hahn(params, make_grid({0.0, 4.0, 401}), 13.0);
    write_signal_csv(path("fig4a.csv"), hh);
    write_text(path("fig4a.gp"),
               gnuplot_header("Hartmann-Hahn polarization transfer") +
                   "set xlabel 'spin-lock duration (us)'\nset ylabel 'NV signal'\n"
                   "plot 'fig4a.csv' using 1:2 with linespoints pt 6 title 'simulated'\n");
    return kExitOk;
  }
  if (figure_id == "4b") {
    const auto grid = make_grid({0.0, 20.0, 512});
    const Spectrum up = run_polarization_transfer(params, 0.7, 0.0, grid, 1.25);
    const Spectrum dn = run_polarization_transfer(params, 0.7, std::numbers::pi, grid, 1.25);
    write_table_csv(path("fig4b.csv"), up.meta,
                    {"freq_mhz", "phase0_magnitude", "phase_pi_magnitude"},
                    {up.freqs_mhz, up.magnitudes, dn.magnitudes});
    write_text(path("fig4b.gp"),
               gnuplot_header("Dark-spin polarization readout") +
                   "set xlabel 'frequency (MHz)'\nset ylabel '|FFT|'\nset xrange [0:2.6]\n"
                   "plot 'fig4b.csv' using 1:2 with lines lw 2 title 'transfer phase 0', \\\n"
                   "     'fig4b.csv' using 1:3 with lines lw 2 title 'transfer phase pi'\n");
    return kExitOk;
  }
  if (figure_id == "s_deerrabi") {
    const Signal rabi = run_deer_rabi(params, make_grid({0.0, 1.0, 512}), 13.3);
    const Spectrum spec = compute_fft(rabi, 4, Window::kHann);
    write_spectrum_csv(path("fig_s_deerrabi.csv"), spec);
    write_text(path("fig_s_deerrabi.gp"),
               gnuplot_header("Dark-spin Rabi spectrum") +
                   "set xlabel 'frequency (MHz)'\nset ylabel '|FFT|'\n"
                   "plot 'fig_s_deerrabi.csv' using 1:2 with lines lw 2 title 'spectrum'\n");
    return kExitOk;
  }
  if (figure_id == "s_zeeman") {
    const ZeemanLines lines =
        run_zeeman_scan(make_grid({0.0, 700.0, 141}), constants::kNvZfsMhz);
    json pj;
    to_json(pj, params);
    write_table_csv(path("fig_s_zeeman.csv"), TraceMeta{"zeeman", pj, json::object()},
                    {"b0_gauss", "nv_mhz", "ds_mhz"},
                    {lines.b0_gauss, lines.nv_mhz, lines.ds_mhz});
    write_text(path("fig_s_zeeman.gp"),
               gnuplot_header("Zeeman spectroscopy") +
                   "set xlabel 'B0 (gauss)'\nset ylabel 'transition frequency (MHz)'\n"
                   "plot 'fig_s_zeeman.csv' using 1:2 with lines lw 2 title 'NV', \\\n"
                   "     'fig_s_zeeman.csv' using 1:3 with lines lw 2 title 'dark spins'\n");
    return kExitOk;
  }
  std::cerr << "unknown figure id '" << figure_id << "'\n";
  return kExitBadInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-electronic-spin cluster simulator and spectrum analyzer"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a protocol sweep and write CSV");
  std::string sim_config, sim_out = "out.csv", sim_protocol;
  double sim_tppi = std::nan(""), sim_tau = std::nan(""), sim_noise = std::nan("");
  double sim_start = std::nan(""), sim_stop = std::nan("");
  int sim_npoints = 0;
  std::int64_t sim_seed = -1;
  sim->add_option("--config", sim_config, "cluster params or run-config JSON")->required();
  sim->add_option("--protocol", sim_protocol,
                  "sedor|nv_esr|deer_esr|hartmann_hahn|polarization_transfer|deer_rabi|"
                  "nv_rabi|zeeman");
  sim->add_option("--out", sim_out, "output CSV path");
  sim->add_option("--tppi", sim_tppi, "TPPI frequency, MHz");
  sim->add_option("--tau", sim_tau, "fixed free-precession time, us");
  sim->add_option("--noise-sigma", sim_noise, "additive Gaussian noise sigma");
  sim->add_option("--seed", sim_seed, "noise seed");
  sim->add_option("--start", sim_start, "sweep start");
  sim->add_option("--stop", sim_stop, "sweep stop");
  sim->add_option("--points", sim_npoints, "sweep point count");

  // analyze
  auto* ana = app.add_subcommand("analyze", "fft / fit / extract on a CSV");
  std::string ana_input, ana_mode = "fft", ana_out = "analysis.json", ana_esr_csv,
              ana_window = "none";
  int ana_npeaks = 3, ana_nsines = 4, ana_pad = 4;
  double ana_esr_split = std::nan(""), ana_d4 = 0.10;
  ana->add_option("--input", ana_input, "input CSV")->required();
  ana->add_option("--mode", ana_mode, "fft|lorentz|sines|extract");
  ana->add_option("--out", ana_out, "output path (CSV for fft, JSON otherwise)");
  ana->add_option("--n-peaks", ana_npeaks, "Lorentzian count");
  ana->add_option("--n-sines", ana_nsines, "damped-sine count");
  ana->add_option("--zero-pad", ana_pad, "FFT zero-pad factor");
  ana->add_option("--window", ana_window, "none|hann");
  ana->add_option("--esr-splitting", ana_esr_split, "ESR full splitting, MHz (extract)");
  ana->add_option("--esr-csv", ana_esr_csv, "ESR spectrum CSV to fit for the splitting");
  ana->add_option("--d4-bound", ana_d4, "|A1+A2| bound, MHz (extract)");

  // analytic
  auto* anl = app.add_subcommand("analytic", "closed-form frequencies and amplitudes");
  std::string anl_config, anl_out;
  anl->add_option("--config", anl_config, "cluster params JSON")->required();
  anl->add_option("--out", anl_out, "output JSON path (stdout when omitted)");

  // figures
  auto* fig = app.add_subcommand("figures", "write a figure reproduction bundle");
  std::string fig_id, fig_dir = ".";
  fig->add_option("figure", fig_id, "2a|2b|3b|3c|4a|4b|s_deerrabi|s_zeeman")->required();
  fig->add_option("--out-dir", fig_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      RunConfig cfg = parse_config(load_json(sim_config));
      if (!sim_protocol.empty()) cfg.protocol = sim_protocol;
      if (cfg.protocol.empty()) throw Error("no protocol given (flag or config)");
      if (!std::isnan(sim_tppi)) cfg.options["tppi_nu_mhz"] = sim_tppi;
      if (!std::isnan(sim_tau)) cfg.options["tau_us"] = sim_tau;
      if (!std::isnan(sim_noise)) cfg.options["noise_sigma"] = sim_noise;
      if (sim_seed >= 0) cfg.options["seed"] = static_cast<std::uint64_t>(sim_seed);
      if (sim_npoints > 0) {
        if (std::isnan(sim_start) || std::isnan(sim_stop)) {
          throw Error("--points requires --start and --stop");
        }
        cfg.sweep = Sweep{sim_start, sim_stop, sim_npoints};
      }
      return run_simulate(cfg, sim_out);
    }
    if (ana->parsed()) {
      json opt;
      opt["n_peaks"] = ana_npeaks;
      opt["n_sines"] = ana_nsines;
      opt["zero_pad_factor"] = ana_pad;
      opt["window"] = ana_window;
      opt["d4_bound_mhz"] = ana_d4;
      if (!std::isnan(ana_esr_split)) opt["esr_splitting_mhz"] = ana_esr_split;
      if (!ana_esr_csv.empty()) opt["esr_csv"] = ana_esr_csv;
      return run_analyze(ana_input, ana_mode, opt, ana_out);
    }
    if (anl->parsed()) {
      const RunConfig cfg = parse_config(load_json(anl_config));
      return run_analytic(cfg.params, anl_out);
    }
    if (fig->parsed()) {
      return run_figures(fig_id, fig_dir);
    }
  } catch (const NyquistError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNyquist;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
