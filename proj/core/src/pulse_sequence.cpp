#include "spinlab/pulse_sequence.hpp"

#include <cmath>

namespace spinlab {

namespace {

Matrix2c rotation2(double axis_phase_rad, double angle_rad) {
  const Matrix2c gen =
      std::cos(axis_phase_rad) * ops::sx() + std::sin(axis_phase_rad) * ops::sy();
  // exp(-i*angle*G) for G with eigenvalues +-1/2
  const Matrix2c g2 = 2.0 * gen;  // involutory
  return std::cos(angle_rad / 2.0) * Matrix2c::Identity() -
         std::complex<double>(0.0, std::sin(angle_rad / 2.0)) * g2;
}

}  // namespace

SpinState apply_ideal_pulse(const SpinState& state, Channel channel,
                            double axis_phase_rad, double angle_rad) {
  if (angle_rad < 0.0) throw SequenceError("ideal pulse: angle must be >= 0");
  const Matrix2c u2 = rotation2(axis_phase_rad, angle_rad);
  Matrix8c u;
  if (channel == Channel::kNv) {
    u = ops::kron3(u2, ops::id2(), ops::id2());
  } else {
    u = ops::kron3(ops::id2(), u2, u2);
  }
  return SpinState{u * state.rho * u.adjoint()};
}

SpinState apply_finite_pulse(const SpinState& state, Channel channel, double rabi_mhz,
                             double carrier_offset_mhz, double duration_us,
                             const ClusterParams& params) {
  if (duration_us < 0.0) throw SequenceError("finite pulse: duration must be >= 0");
  if (rabi_mhz < 0.0) throw SequenceError("finite pulse: rabi must be >= 0");
  Hamiltonian h = build_hamiltonian(params);
  if (channel == Channel::kDs) {
    h.matrix += -carrier_offset_mhz * (ops::sz1() + ops::sz2()) +
                rabi_mhz * (ops::sx1() + ops::sx2());
  } else {
    h.matrix += -carrier_offset_mhz * ops::pm1_nv() + rabi_mhz * ops::sx_nv();
  }
  const Matrix8c u = propagator(h, duration_us);
  return SpinState{u * state.rho * u.adjoint()};
}

SpinState repolarize_nv(const SpinState& state) {
  return product_state(ops::p0(), partial_trace_nv(state));
}

ReadoutPair run_sequence(const PulseSequence& seq, const ClusterParams& params,
                         const SpinState& initial) {
  int readouts = 0;
  for (const auto& step : seq) {
    if (std::holds_alternative<MarkReadout>(step)) ++readouts;
  }
  if (readouts < 1 || readouts > 2) {
    throw SequenceError("run_sequence: sequence must contain one or two readout markers");
  }

  const Hamiltonian h = build_hamiltonian(params);
  SpinState state = initial;
  ReadoutPair out;
  int seen = 0;
  for (const auto& step : seq) {
    if (const auto* p = std::get_if<PulseEvent>(&step)) {
      if (const auto* ideal = std::get_if<IdealPulse>(&p->shape)) {
        state = apply_ideal_pulse(state, p->channel, ideal->axis_phase_rad,
                                  ideal->angle_rad);
      } else {
        const auto& f = std::get<FinitePulse>(p->shape);
        state = apply_finite_pulse(state, p->channel, f.rabi_mhz,
                                   f.carrier_offset_mhz, f.duration_us, params);
      }
    } else if (const auto* d = std::get_if<Delay>(&step)) {
      if (d->duration_us < 0.0) throw SequenceError("delay: duration must be >= 0");
      if (d->duration_us > 0.0) {
        const Matrix8c u = propagator(h, d->duration_us);
        state = SpinState{u * state.rho * u.adjoint()};
      }
    } else if (std::holds_alternative<RepolarizeNv>(step)) {
      state = repolarize_nv(state);
    } else {
      const double y = nv_population(state);
      if (seen++ == 0) {
        out.y1 = y;
      } else {
        out.y2 = y;
      }
    }
  }
  return out;
}

double contrast(const ReadoutPair& pair) {
  if (!pair.y2) throw ContrastError("contrast: needs two readouts");
  const double sum = pair.y1 + *pair.y2;
  if (sum == 0.0) throw ContrastError("contrast: y1 + y2 = 0");
  return (*pair.y2 - pair.y1) / sum;
}

Signal apply_decay_envelope(const Signal& signal, double t2_us, double p) {
  if (!(t2_us > 0.0)) throw Error("apply_decay_envelope: t2 must be > 0");
  Signal out = signal;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double t = out.times_us[i];
    out.values[i] *= t <= 0.0 ? 1.0 : std::exp(-std::pow(t / t2_us, p));
  }
  return out;
}

nlohmann::json sequence_to_json(const PulseSequence& seq) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& step : seq) {
    nlohmann::json j;
    if (const auto* p = std::get_if<PulseEvent>(&step)) {
      j["type"] = "pulse";
      j["channel"] = p->channel == Channel::kNv ? "NV" : "DS";
      if (const auto* ideal = std::get_if<IdealPulse>(&p->shape)) {
        j["shape"] = "ideal";
        j["phase_rad"] = ideal->axis_phase_rad;
        j["angle_rad"] = ideal->angle_rad;
      } else {
        const auto& f = std::get<FinitePulse>(p->shape);
        j["shape"] = "finite";
        j["rabi_mhz"] = f.rabi_mhz;
        j["carrier_offset_mhz"] = f.carrier_offset_mhz;
        j["duration_us"] = f.duration_us;
      }
    } else if (const auto* d = std::get_if<Delay>(&step)) {
      j["type"] = "delay";
      j["us"] = d->duration_us;
    } else if (std::holds_alternative<RepolarizeNv>(step)) {
      j["type"] = "repolarize_nv";
    } else {
      j["type"] = "readout";
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

PulseSequence sequence_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw IoError("sequence JSON must be an array of steps");
  PulseSequence seq;
  for (const auto& step : j) {
    const std::string type = step.at("type").get<std::string>();
    if (type == "pulse") {
      PulseEvent p;
      const std::string ch = step.at("channel").get<std::string>();
      if (ch == "NV") {
        p.channel = Channel::kNv;
      } else if (ch == "DS") {
        p.channel = Channel::kDs;
      } else {
        throw IoError("unknown channel '" + ch + "'");
      }
      const std::string shape = step.value("shape", "ideal");
      if (shape == "ideal") {
        p.shape = IdealPulse{step.value("phase_rad", 0.0), step.at("angle_rad").get<double>()};
      } else if (shape == "finite") {
        p.shape = FinitePulse{step.at("rabi_mhz").get<double>(),
                              step.value("carrier_offset_mhz", 0.0),
                              step.at("duration_us").get<double>()};
      } else {
        throw IoError("unknown pulse shape '" + shape + "'");
      }
      seq.emplace_back(p);
    } else if (type == "delay") {
      seq.emplace_back(Delay{step.at("us").get<double>()});
    } else if (type == "repolarize_nv") {
      seq.emplace_back(RepolarizeNv{});
    } else if (type == "readout") {
      seq.emplace_back(MarkReadout{});
    } else {
      throw IoError("unknown sequence step type '" + type + "'");
    }
  }
  return seq;
}

}  // namespace spinlab
