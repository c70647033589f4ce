#pragma once

#include <json.hpp>
#include <optional>
#include <variant>
#include <vector>

#include "spinlab/signal.hpp"
#include "spinlab/spin_system.hpp"

namespace spinlab {

enum class Channel { kNv, kDs };  // DS drives both dark spins simultaneously

// Instantaneous rotation exp(-i*angle*(cos(phase) Sx + sin(phase) Sy)).
struct IdealPulse {
  double axis_phase_rad = 0.0;
  double angle_rad = 0.0;
};

// Rectangular drive of given Rabi frequency at a carrier offset from the
// channel reference, with the internal Hamiltonian retained for the
// duration.
struct FinitePulse {
  double rabi_mhz = 0.0;
  double carrier_offset_mhz = 0.0;
  double duration_us = 0.0;
};

struct PulseEvent {
  Channel channel = Channel::kNv;
  std::variant<IdealPulse, FinitePulse> shape = IdealPulse{};
};

struct Delay {
  double duration_us = 0.0;
};
struct RepolarizeNv {};
struct MarkReadout {};

using SequenceStep = std::variant<PulseEvent, Delay, RepolarizeNv, MarkReadout>;
using PulseSequence = std::vector<SequenceStep>;

// Populations recorded at the one or two readout markers of a sequence
// (two when the sequence embeds its own symmetrized pair).
struct ReadoutPair {
  double y1 = 0.0;
  std::optional<double> y2;
};

SpinState apply_ideal_pulse(const SpinState& state, Channel channel,
                            double axis_phase_rad, double angle_rad);

// Drive with the internal couplings kept: for the DS channel
// H = H_int - c (Sz1+Sz2) + rabi (Sx1+Sx2), for the NV channel
// H = H_int - c P_-1 + rabi Sx_NV (rabi is the channel's on-resonance Rabi
// frequency, so a resonant pi pulse lasts 1/(2 rabi)).
SpinState apply_finite_pulse(const SpinState& state, Channel channel, double rabi_mhz,
                             double carrier_offset_mhz, double duration_us,
                             const ClusterParams& params);

// Optical reset: rho -> |0><0|_NV (x) Tr_NV(rho). Dark spins untouched.
SpinState repolarize_nv(const SpinState& state);

// Executes the steps in order; records Tr(P0 rho) at each readout marker.
// Sequences must carry exactly one or two markers.
ReadoutPair run_sequence(const PulseSequence& seq, const ClusterParams& params,
                         const SpinState& initial);

// Symmetrized contrast (y2 - y1)/(y2 + y1) of a two-readout pair.
double contrast(const ReadoutPair& pair);

// Multiplies each sample at time t by exp(-(t/t2)^p); phenomenological
// decoherence applied to signals, never to states.
Signal apply_decay_envelope(const Signal& signal, double t2_us, double p);

// JSON step schema, e.g.
//   {"type":"pulse","channel":"NV","shape":"ideal","phase_rad":0,"angle_rad":1.5708}
//   {"type":"pulse","channel":"DS","shape":"finite","rabi_mhz":13,
//    "carrier_offset_mhz":0,"duration_us":0.0385}
//   {"type":"delay","us":0.5}  {"type":"repolarize_nv"}  {"type":"readout"}
nlohmann::json sequence_to_json(const PulseSequence& seq);
PulseSequence sequence_from_json(const nlohmann::json& j);

}  // namespace spinlab
