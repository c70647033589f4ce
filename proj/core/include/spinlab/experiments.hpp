#pragma once

#include <optional>

#include "spinlab/pulse_sequence.hpp"
#include "spinlab/signal.hpp"
#include "spinlab/spin_system.hpp"

// Measurement protocol drivers. Every driver is a pure function of its
// arguments; sweep points are independent and evaluated in a deterministic
// order. Dark spins start maximally mixed (I/4) in all protocols; the
// polarization-transfer readout prepares its own polarized state. The two
// readouts of each symmetrized pair are ordered so that a perfect echo
// (and a zero-length spin lock) gives contrast +1.
namespace spinlab {

// Swept-carrier ESR of the NV with a finite probe pulse and mixed dark
// spins. freq_grid holds carrier offsets from the bare NV transition, MHz.
// Dips appear at (+-(A1-A2)/2, +-(A1+A2)/2). Not symmetrized (population
// proxy, not contrast).
Spectrum run_nv_esr(const ClusterParams& params, const std::vector<double>& freq_grid_mhz,
                    const PulseEvent& probe);

// Convenience overload with a rectangular pi probe of the given Rabi
// frequency (default 0.25 MHz resolves sub-MHz splittings).
Spectrum run_nv_esr(const ClusterParams& params, const std::vector<double>& freq_grid_mhz,
                    double probe_rabi_mhz = 0.25);

// NV Hahn echo of total free time tau with a finite dark-spin pi pulse at
// the swept absolute carrier (MHz; dark-spin resonances sit near
// gamma_e*B0 + omega_i). The NV pi is applied at the center of the DS
// pulse. Returns contrast vs carrier frequency.
Spectrum run_deer_esr(const ClusterParams& params, const std::vector<double>& ds_freq_grid_mhz,
                      double tau_us, double ds_rabi_mhz = 13.0);

struct SedorOptions {
  std::optional<double> tppi_nu_mhz;  // phase-increment frequency for the last pi/2
  std::optional<double> t2_us;        // decay envelope, applied when set
  double p = 1.0;                     // stretch exponent of the envelope
  // When set, replaces the ideal mid-sequence DS pi pulse by a rectangular
  // pulse of this Rabi frequency at the given carrier offset. The duration
  // defaults to the resonance-calibrated pi time 1/(2 rabi).
  std::optional<double> ds_rabi_mhz;
  double ds_carrier_offset_mhz = 0.0;
  std::optional<double> ds_pulse_duration_us;
  // Initial state override (dark-spin polarization studies).
  std::optional<SpinState> initial;
};

// Spin-echo double resonance: pi/2 - tau/2 - (NV pi + DS pi) - tau/2 -
// pi/2(phi), phi = 2 pi nu tau under TPPI, symmetrized readout.
// Rejects grids that undersample the fastest expected component.
Signal run_sedor(const ClusterParams& params, const std::vector<double>& tau_grid_us,
                 const SedorOptions& options = {});

// NV pi/2, then simultaneous spin locks on NV and DS channels for each
// duration in the grid; the NV drive carries the extra hh_detuning. Readout
// projects the locked NV component back to population, symmetrized so
// T = 0 gives +1. Transfer oscillates near sqrt(A1^2+A2^2)/2 on resonance.
Signal run_hartmann_hahn(const ClusterParams& params, const std::vector<double>& spinlock_grid_us,
                         double rabi_mhz, double hh_detuning_mhz = 0.0);

// Hartmann-Hahn block at fixed duration with the initial NV pi/2 along
// nv_phase (0: parallel to the lock axis, pi: anti-parallel), dark-spin
// pi/2 storage pulse, optical NV reset, then a SEDOR + TPPI readout sweep.
// Returns the magnitude spectrum of the readout trace; flipping nv_phase by
// pi flips the asymmetry of every nu +- D_i/2 peak pair.
Spectrum run_polarization_transfer(const ClusterParams& params, double spinlock_us,
                                   double nv_phase_rad, const std::vector<double>& tau_grid_us,
                                   double tppi_nu_mhz, double rabi_mhz = 13.0,
                                   int zero_pad_factor = 4);

// SEDOR-style sequence at fixed tau with the DS pulse duration swept; the
// trace oscillates at the DS Rabi frequency (plus harmonics from the long
// coupling time).
Signal run_deer_rabi(const ClusterParams& params, const std::vector<double>& ds_pulse_grid_us,
                     double ds_rabi_mhz, double tau_us = 3.0);

// Resonant NV drive of swept duration at a drive field calibrated in
// S=1/2 Rabi units; the NV pseudo-spin nutates sqrt(2) faster than a dark
// spin at the same field amplitude.
Signal run_nv_rabi(const ClusterParams& params, const std::vector<double>& duration_grid_us,
                   double drive_field_mhz);

struct ZeemanLines {
  std::vector<double> b0_gauss;
  std::vector<double> nv_mhz;  // D - gamma_e B0
  std::vector<double> ds_mhz;  // gamma_e B0
};

ZeemanLines run_zeeman_scan(const std::vector<double>& b0_grid_gauss,
                            double zero_field_splitting_mhz);

}  // namespace spinlab
