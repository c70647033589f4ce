#pragma once

#include <optional>

#include "spinlab/cluster_params.hpp"

// Closed-form model of the spin-echo double-resonance experiment: the four
// characteristic frequencies, the component amplitudes of the contrast
// trace, the ESR splittings and the detuned-pulse error floor. No time
// evolution anywhere; the time-domain simulator cross-checks these in the
// test suite.
namespace spinlab {

struct SedorFrequencies {
  double delta1;  // sqrt(J12^2 + (w1-w2)^2): flip-flop rate with NV in |0>
  double delta2;  // sqrt((A1-A2+w1-w2)^2 + J12^2): dressed splitting in |-1>
  double delta3;  // delta2 - delta1: propagator-interference component
  double delta4;  // A1 + A2: field of the stretched dark-spin states
};

// Signed amplitudes of the contrast-trace components, in contrast units.
// The trace is
//   dc + d1 cos(2pi (D1/2) t) + d2 cos(2pi (D2/2) t) + d3 cos(2pi (D3/2) t)
//      + sum cos(2pi (D1+D2)/2 t) + 0.5 cos(2pi (D4/2) t),
// the last term coming from the up-up/down-down dark subspace. The dc and
// D4/2 components merge whenever |D4|/2 is below the spectral resolution.
struct SedorAmplitudes {
  double dc;
  double d1;
  double d2;
  double d3;
  double sum;  // (D1+D2)/2 component
  double d4 = 0.5;
};

struct SedorModel {
  SedorFrequencies freqs;
  SedorAmplitudes amps;
  double delta;       // w1 - w2
  double delta1_sym;  // A1 - A2 + delta
  double gamma;       // delta^2 delta1^2 + delta^2 J^2 + delta1^2 J^2 + J^4 = (D1 D2)^2
};

SedorFrequencies sedor_frequencies(const ClusterParams& params);

// Certified closed form (matches the time-domain simulator to numerical
// precision; see tests/reconciliation). Throws DegenerateSpectrumError when
// D1*D2 = 0 and the components merge.
SedorAmplitudes sedor_amplitudes(const ClusterParams& params);

// Tabulated variant of the amplitude expressions, kept verbatim for
// comparison. Its relative magnitudes do NOT reproduce the simulated
// spectrum (two terms carry the opposite sign and the overall scale
// differs); the reconciliation test documents the difference. Prefer
// sedor_amplitudes().
SedorAmplitudes sedor_amplitudes_tabulated(const ClusterParams& params);

SedorModel sedor_model(const ClusterParams& params);

// Normalize component magnitudes to the D1/2 component.
SedorAmplitudes normalized_to_d1(const SedorAmplitudes& a);

struct EsrSplittings {
  double outer;  // (A1 - A2)/2: field of the up-down / down-up subspace
  double inner;  // (A1 + A2)/2: field of the up-up / down-down subspace
};

EsrSplittings esr_splittings(const ClusterParams& params);

// Fraction of NV coherence left un-modulated after a detuned dark-spin pi
// pulse with sqrt(rabi^2 + delta^2) * T = pi: delta^2 / (rabi^2 + delta^2).
double pulse_error_dc(double delta_mhz, double rabi_mhz);

struct ValueCi {
  double value = 0.0;
  double ci95 = 0.0;  // half-width
};

struct ExtractedParams {
  ValueCi j12_abs;      // |J12|
  ValueCi delta_omega;  // w1 - w2
  ValueCi a_diff;       // A1 - A2
  ValueCi a1;           // (A1-A2)/2 with the |A1+A2| bound as uncertainty
  ValueCi a2;
  double a_sum_bound = 0.0;
  int discarded_branches = 0;  // sign branches rejected by delta>=0, J>=0
};

// Invert (D1, D2, ESR full splitting) to the cluster parameters:
//   A1-A2 = splitting;  delta = ((D2^2-D1^2)/(A1-A2) - (A1-A2))/2;
//   J12 = sqrt(D1^2 - delta^2);  |A1+A2| <= d4_bound (midpoint 0 reported).
// Optional input CIs propagate to the outputs by finite-difference
// linearization. Throws NoRealSolutionError when D1^2 < delta^2.
ExtractedParams extract_cluster_params(double delta1, double delta2,
                                       double esr_full_splitting, double d4_bound,
                                       std::optional<ValueCi> delta1_ci = {},
                                       std::optional<ValueCi> delta2_ci = {},
                                       std::optional<ValueCi> splitting_ci = {});

}  // namespace spinlab
