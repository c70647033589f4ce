#include "spinlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinlab/constants.hpp"
#include "spinlab/fitting.hpp"
#include "spinlab/sedor_model.hpp"

namespace spinlab {

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::json params_json(const ClusterParams& p) {
  nlohmann::json j;
  to_json(j, p);
  return j;
}

void check_uniform_grid(const std::vector<double>& grid, const char* what) {
  if (grid.size() < 2) throw GridError(std::string(what) + ": need at least two points");
  const double step = grid[1] - grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = grid[i] - grid[i - 1];
    if (d <= 0.0 || std::abs(d - step) > 1e-9 * std::max(1.0, std::abs(step))) {
      throw GridError(std::string(what) + ": grid must be uniform and increasing");
    }
  }
}

// One symmetrized SEDOR execution: returns the contrast at free time tau.
double sedor_point(const ClusterParams& params, const Hamiltonian& h, double tau_us,
                   const SedorOptions& opt, const SpinState& initial) {
  const Matrix8c u_half = propagator(h, tau_us / 2.0);

  SpinState mid_in = SpinState{u_half *
                               apply_ideal_pulse(initial, Channel::kNv, 0.0, kPi / 2.0).rho *
                               u_half.adjoint()};
  SpinState mid;
  if (opt.ds_rabi_mhz) {
    // rectangular DS pi pulse split around the instantaneous NV pi
    const double rabi = *opt.ds_rabi_mhz;
    const double t_pi = opt.ds_pulse_duration_us.value_or(
        rabi > 0.0 ? 1.0 / (2.0 * rabi) : 0.0);
    SpinState s = apply_finite_pulse(mid_in, Channel::kDs, rabi, opt.ds_carrier_offset_mhz,
                                     t_pi / 2.0, params);
    s = apply_ideal_pulse(s, Channel::kNv, 0.0, kPi);
    mid = apply_finite_pulse(s, Channel::kDs, rabi, opt.ds_carrier_offset_mhz, t_pi / 2.0,
                             params);
  } else {
    SpinState s = apply_ideal_pulse(mid_in, Channel::kNv, 0.0, kPi);
    mid = apply_ideal_pulse(s, Channel::kDs, 0.0, kPi);
  }
  const SpinState end = SpinState{u_half * mid.rho * u_half.adjoint()};

  const double tppi = opt.tppi_nu_mhz ? 2.0 * kPi * *opt.tppi_nu_mhz * tau_us : 0.0;
  ReadoutPair pair;
  pair.y1 = nv_population(apply_ideal_pulse(end, Channel::kNv, tppi + kPi, kPi / 2.0));
  pair.y2 = nv_population(apply_ideal_pulse(end, Channel::kNv, tppi, kPi / 2.0));
  return contrast(pair);
}

}  // namespace

Spectrum run_nv_esr(const ClusterParams& params, const std::vector<double>& freq_grid_mhz,
                    const PulseEvent& probe) {
  params.validate();
  const auto* shape = std::get_if<FinitePulse>(&probe.shape);
  if (probe.channel != Channel::kNv || shape == nullptr) {
    throw SequenceError("run_nv_esr: probe must be a finite NV pulse");
  }
  Spectrum out;
  out.freqs_mhz.reserve(freq_grid_mhz.size());
  out.magnitudes.reserve(freq_grid_mhz.size());
  const SpinState initial = nv_polarized_state();
  for (double f : freq_grid_mhz) {
    const SpinState after = apply_finite_pulse(initial, Channel::kNv, shape->rabi_mhz, f,
                                               shape->duration_us, params);
    out.freqs_mhz.push_back(f);
    out.magnitudes.push_back(nv_population(after));
  }
  out.meta = TraceMeta{"nv_esr", params_json(params),
                       {{"probe_rabi_mhz", shape->rabi_mhz},
                        {"probe_duration_us", shape->duration_us}}};
  return out;
}

Spectrum run_nv_esr(const ClusterParams& params, const std::vector<double>& freq_grid_mhz,
                    double probe_rabi_mhz) {
  if (!(probe_rabi_mhz > 0.0)) throw Error("run_nv_esr: probe rabi must be > 0");
  const PulseEvent probe{Channel::kNv,
                         FinitePulse{probe_rabi_mhz, 0.0, 1.0 / (2.0 * probe_rabi_mhz)}};
  return run_nv_esr(params, freq_grid_mhz, probe);
}

Spectrum run_deer_esr(const ClusterParams& params, const std::vector<double>& ds_freq_grid_mhz,
                      double tau_us, double ds_rabi_mhz) {
  params.validate();
  if (!(tau_us > 0.0)) throw Error("run_deer_esr: tau must be > 0");
  const double f_ref = constants::kGammaEMhzPerGauss * params.b0_gauss;
  const Hamiltonian h = build_hamiltonian(params);
  Spectrum out;
  out.freqs_mhz.reserve(ds_freq_grid_mhz.size());
  out.magnitudes.reserve(ds_freq_grid_mhz.size());
  const SpinState initial = nv_polarized_state();
  SedorOptions opt;
  opt.ds_rabi_mhz = ds_rabi_mhz;
  for (double f : ds_freq_grid_mhz) {
    opt.ds_carrier_offset_mhz = f - f_ref;
    out.freqs_mhz.push_back(f);
    out.magnitudes.push_back(sedor_point(params, h, tau_us, opt, initial));
  }
  out.meta = TraceMeta{"deer_esr", params_json(params),
                       {{"tau_us", tau_us}, {"ds_rabi_mhz", ds_rabi_mhz}}};
  return out;
}

Signal run_sedor(const ClusterParams& params, const std::vector<double>& tau_grid_us,
                 const SedorOptions& options) {
  params.validate();
  check_uniform_grid(tau_grid_us, "run_sedor");

  const SedorFrequencies f = sedor_frequencies(params);
  const double nu = options.tppi_nu_mhz.value_or(0.0);
  const double f_max =
      std::max({(f.delta1 + f.delta2) / 2.0, std::abs(f.delta4) / 2.0}) + std::abs(nu);
  const double dt = tau_grid_us[1] - tau_grid_us[0];
  if (f_max > 0.0 && dt >= 1.0 / (2.0 * f_max)) {
    throw NyquistError("run_sedor: grid step " + format_double(dt) +
                       " us undersamples the expected content (need < " +
                       format_double(1.0 / (2.0 * f_max)) + " us)");
  }

  const Hamiltonian h = build_hamiltonian(params);
  const SpinState initial = options.initial.value_or(nv_polarized_state());
  Signal out;
  out.times_us = tau_grid_us;
  out.values.reserve(tau_grid_us.size());
  for (double tau : tau_grid_us) {
    out.values.push_back(sedor_point(params, h, tau, options, initial));
  }
  nlohmann::json jopt;
  if (options.tppi_nu_mhz) jopt["tppi_nu_mhz"] = *options.tppi_nu_mhz;
  if (options.t2_us) {
    jopt["t2_us"] = *options.t2_us;
    jopt["p"] = options.p;
  }
  if (options.ds_rabi_mhz) jopt["ds_rabi_mhz"] = *options.ds_rabi_mhz;
  out.meta = TraceMeta{"sedor", params_json(params), jopt};
  if (options.t2_us) out = apply_decay_envelope(out, *options.t2_us, options.p);
  return out;
}

Signal run_hartmann_hahn(const ClusterParams& params, const std::vector<double>& spinlock_grid_us,
                         double rabi_mhz, double hh_detuning_mhz) {
  params.validate();
  if (!(rabi_mhz > 0.0)) throw Error("run_hartmann_hahn: rabi must be > 0");
  Hamiltonian lock = build_hamiltonian(params);
  lock.matrix += (rabi_mhz + hh_detuning_mhz) * ops::sx_nv() +
                 rabi_mhz * (ops::sx1() + ops::sx2());

  const SpinState start =
      apply_ideal_pulse(nv_polarized_state(), Channel::kNv, kPi / 2.0, kPi / 2.0);
  Signal out;
  out.times_us = spinlock_grid_us;
  out.values.reserve(spinlock_grid_us.size());
  for (double t : spinlock_grid_us) {
    const Matrix8c u = propagator(lock, t);
    const SpinState locked{u * start.rho * u.adjoint()};
    ReadoutPair pair;
    // project the lock axis back to population: pi/2 about -y maps the
    // locked (+x) component to |0>, pi/2 about +y to |-1>
    pair.y1 = nv_population(apply_ideal_pulse(locked, Channel::kNv, kPi / 2.0, kPi / 2.0));
    pair.y2 =
        nv_population(apply_ideal_pulse(locked, Channel::kNv, 3.0 * kPi / 2.0, kPi / 2.0));
    out.values.push_back(contrast(pair));
  }
  out.meta = TraceMeta{"hartmann_hahn", params_json(params),
                       {{"rabi_mhz", rabi_mhz}, {"hh_detuning_mhz", hh_detuning_mhz}}};
  return out;
}

Spectrum run_polarization_transfer(const ClusterParams& params, double spinlock_us,
                                   double nv_phase_rad, const std::vector<double>& tau_grid_us,
                                   double tppi_nu_mhz, double rabi_mhz, int zero_pad_factor) {
  params.validate();
  check_uniform_grid(tau_grid_us, "run_polarization_transfer");

  Hamiltonian lock = build_hamiltonian(params);
  lock.matrix += rabi_mhz * (ops::sx_nv() + ops::sx1() + ops::sx2());
  const Matrix8c u_lock = propagator(lock, spinlock_us);

  // preparation: NV pi/2 at nv_phase relative to the +y axis (0 aligns the
  // Bloch vector with the +x lock axis), lock, DS storage pi/2 about -y,
  // optical NV reset
  SpinState prep = apply_ideal_pulse(nv_polarized_state(), Channel::kNv,
                                     kPi / 2.0 + nv_phase_rad, kPi / 2.0);
  prep = SpinState{u_lock * prep.rho * u_lock.adjoint()};
  prep = apply_ideal_pulse(prep, Channel::kDs, 3.0 * kPi / 2.0, kPi / 2.0);
  prep = repolarize_nv(prep);

  SedorOptions opt;
  opt.tppi_nu_mhz = tppi_nu_mhz;
  opt.initial = prep;
  Signal trace = run_sedor(params, tau_grid_us, opt);
  trace.meta.protocol = "polarization_transfer";
  trace.meta.options = nlohmann::json{{"spinlock_us", spinlock_us},
                                      {"nv_phase_rad", nv_phase_rad},
                                      {"tppi_nu_mhz", tppi_nu_mhz},
                                      {"rabi_mhz", rabi_mhz}};

  Spectrum spec = compute_fft(trace, zero_pad_factor, Window::kHann);
  spec.meta = trace.meta;
  return spec;
}

Signal run_deer_rabi(const ClusterParams& params, const std::vector<double>& ds_pulse_grid_us,
                     double ds_rabi_mhz, double tau_us) {
  params.validate();
  const Hamiltonian h = build_hamiltonian(params);
  const SpinState initial = nv_polarized_state();
  const Matrix8c u_half = propagator(h, tau_us / 2.0);
  Signal out;
  out.times_us = ds_pulse_grid_us;
  out.values.reserve(ds_pulse_grid_us.size());
  for (double dur : ds_pulse_grid_us) {
    SpinState s = apply_ideal_pulse(initial, Channel::kNv, 0.0, kPi / 2.0);
    s = SpinState{u_half * s.rho * u_half.adjoint()};
    s = apply_finite_pulse(s, Channel::kDs, ds_rabi_mhz, 0.0, dur / 2.0, params);
    s = apply_ideal_pulse(s, Channel::kNv, 0.0, kPi);
    s = apply_finite_pulse(s, Channel::kDs, ds_rabi_mhz, 0.0, dur / 2.0, params);
    s = SpinState{u_half * s.rho * u_half.adjoint()};
    ReadoutPair pair;
    pair.y1 = nv_population(apply_ideal_pulse(s, Channel::kNv, kPi, kPi / 2.0));
    pair.y2 = nv_population(apply_ideal_pulse(s, Channel::kNv, 0.0, kPi / 2.0));
    out.values.push_back(contrast(pair));
  }
  out.meta = TraceMeta{"deer_rabi", params_json(params),
                       {{"ds_rabi_mhz", ds_rabi_mhz}, {"tau_us", tau_us}}};
  return out;
}

Signal run_nv_rabi(const ClusterParams& params, const std::vector<double>& duration_grid_us,
                   double drive_field_mhz) {
  params.validate();
  const double nv_rabi = constants::nv_halfspin_drive_scale() * drive_field_mhz;
  const SpinState initial = nv_polarized_state();
  Signal out;
  out.times_us = duration_grid_us;
  out.values.reserve(duration_grid_us.size());
  for (double dur : duration_grid_us) {
    const SpinState s =
        apply_finite_pulse(initial, Channel::kNv, nv_rabi, 0.0, dur, params);
    out.values.push_back(nv_population(s));
  }
  out.meta = TraceMeta{"nv_rabi", params_json(params),
                       {{"drive_field_mhz", drive_field_mhz}}};
  return out;
}

ZeemanLines run_zeeman_scan(const std::vector<double>& b0_grid_gauss,
                            double zero_field_splitting_mhz) {
  ZeemanLines out;
  out.b0_gauss.reserve(b0_grid_gauss.size());
  for (double b : b0_grid_gauss) {
    if (b < 0.0) throw Error("run_zeeman_scan: B0 must be >= 0");
    out.b0_gauss.push_back(b);
    out.nv_mhz.push_back(zero_field_splitting_mhz - constants::kGammaEMhzPerGauss * b);
    out.ds_mhz.push_back(constants::kGammaEMhzPerGauss * b);
  }
  return out;
}

}  // namespace spinlab
