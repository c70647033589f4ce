#include "spinlab/sedor_model.hpp"

#include <array>
#include <cmath>

namespace spinlab {

SedorFrequencies sedor_frequencies(const ClusterParams& params) {
  params.validate();
  const double delta = params.delta_omega();
  const double delta1 = params.a_diff() + delta;
  const double j = params.j12_mhz;
  SedorFrequencies f;
  f.delta1 = std::hypot(j, delta);
  f.delta2 = std::hypot(j, delta1);
  f.delta3 = f.delta2 - f.delta1;
  f.delta4 = params.a_sum();
  return f;
}

SedorAmplitudes sedor_amplitudes(const ClusterParams& params) {
  const SedorFrequencies f = sedor_frequencies(params);
  if (f.delta1 == 0.0 || f.delta2 == 0.0) {
    throw DegenerateSpectrumError("sedor_amplitudes: D1*D2 = 0, components merge");
  }
  const double delta = params.delta_omega();
  const double delta1 = params.a_diff() + delta;
  const double j2 = params.j12_mhz * params.j12_mhz;
  // Echo overlap of the two NV-conditioned flip-flop propagators reduces to
  // a product of four SU(2) rotations; expanding its scalar part gives the
  // component amplitudes below (b terms are axis overlaps n.n~ of the two
  // conditioned Hamiltonians with their pi-pulse reflections).
  const double b1 = (j2 - delta * delta) / (f.delta1 * f.delta1);
  const double b2 = (j2 - delta1 * delta1) / (f.delta2 * f.delta2);
  const double cross = delta * delta1 / (f.delta1 * f.delta2);
  SedorAmplitudes a;
  a.dc = 0.25 + (b1 + b2) / 8.0;
  a.d1 = (b2 - b1) / 8.0;
  a.d2 = (b1 - b2) / 8.0;
  a.d3 = (2.0 - b1 - b2) / 16.0 + cross / 4.0;
  a.sum = (2.0 - b1 - b2) / 16.0 - cross / 4.0;
  a.d4 = 0.5;
  return a;
}

SedorAmplitudes sedor_amplitudes_tabulated(const ClusterParams& params) {
  const SedorFrequencies f = sedor_frequencies(params);
  if (f.delta1 == 0.0 || f.delta2 == 0.0) {
    throw DegenerateSpectrumError("sedor_amplitudes_tabulated: D1*D2 = 0");
  }
  const double delta = params.delta_omega();
  const double delta1 = params.a_diff() + delta;
  const double j2 = params.j12_mhz * params.j12_mhz;
  const double d1sq = f.delta1 * f.delta1;
  const double d2sq = f.delta2 * f.delta2;
  const double gamma = delta * delta * delta1 * delta1 + delta * delta * j2 +
                       delta1 * delta1 * j2 + j2 * j2;
  const double norm = d1sq * d2sq;
  SedorAmplitudes a;
  a.d1 = (d2sq * (j2 - delta * delta) - gamma + d1sq * (j2 - delta1 * delta1) +
          d1sq * d2sq) /
         norm;
  a.d2 = a.d1;
  a.d3 = (d2sq * (delta * delta - j2) + gamma + d1sq * d2sq +
          d1sq * (delta1 * delta1 - j2) + 4.0 * delta * delta1 * f.delta1 * f.delta2) /
         (2.0 * norm);
  a.sum = (d2sq * (delta * delta - j2) + gamma + d1sq * d2sq +
           d1sq * (delta1 * delta1 - j2) - 4.0 * delta * delta1 * f.delta1 * f.delta2) /
          (2.0 * norm);
  a.dc = (d2sq * (delta * delta - j2) + gamma + d1sq * d2sq +
          d1sq * (-delta1 * delta1 + j2)) /
         norm;
  a.d4 = 0.5;
  return a;
}

SedorModel sedor_model(const ClusterParams& params) {
  SedorModel m;
  m.freqs = sedor_frequencies(params);
  m.amps = sedor_amplitudes(params);
  m.delta = params.delta_omega();
  m.delta1_sym = params.a_diff() + m.delta;
  const double j2 = params.j12_mhz * params.j12_mhz;
  m.gamma = m.delta * m.delta * m.delta1_sym * m.delta1_sym + m.delta * m.delta * j2 +
            m.delta1_sym * m.delta1_sym * j2 + j2 * j2;
  return m;
}

SedorAmplitudes normalized_to_d1(const SedorAmplitudes& a) {
  const double ref = std::abs(a.d1);
  if (ref == 0.0) {
    throw DegenerateSpectrumError("normalized_to_d1: D1/2 component vanishes");
  }
  return SedorAmplitudes{std::abs(a.dc) / ref, 1.0, std::abs(a.d2) / ref,
                         std::abs(a.d3) / ref, std::abs(a.sum) / ref,
                         std::abs(a.d4) / ref};
}

EsrSplittings esr_splittings(const ClusterParams& params) {
  params.validate();
  return EsrSplittings{params.a_diff() / 2.0, params.a_sum() / 2.0};
}

double pulse_error_dc(double delta_mhz, double rabi_mhz) {
  if (delta_mhz == 0.0 && rabi_mhz == 0.0) {
    throw Error("pulse_error_dc: delta and rabi cannot both be zero");
  }
  return delta_mhz * delta_mhz / (rabi_mhz * rabi_mhz + delta_mhz * delta_mhz);
}

namespace {

struct Solution {
  double delta;
  double j12;
  double a_diff;
};

// Single sign branch: a_diff taken positive, delta from the quadratic
// difference, j12 >= 0. Other branches are sign images of this one.
Solution solve_branch(double d1, double d2, double splitting) {
  Solution s;
  s.a_diff = splitting;
  s.delta = ((d2 * d2 - d1 * d1) / splitting - splitting) / 2.0;
  const double j2 = d1 * d1 - s.delta * s.delta;
  if (j2 < 0.0) {
    throw NoRealSolutionError("extract_cluster_params: D1^2 < delta^2");
  }
  s.j12 = std::sqrt(j2);
  return s;
}

}  // namespace

ExtractedParams extract_cluster_params(double delta1, double delta2,
                                       double esr_full_splitting, double d4_bound,
                                       std::optional<ValueCi> delta1_ci,
                                       std::optional<ValueCi> delta2_ci,
                                       std::optional<ValueCi> splitting_ci) {
  if (!(delta2 > delta1) || !(delta1 > 0.0)) {
    throw NoRealSolutionError("extract_cluster_params: need D2 > D1 > 0");
  }
  if (!(esr_full_splitting > 0.0)) {
    throw NoRealSolutionError("extract_cluster_params: need a positive ESR splitting");
  }
  const Solution s = solve_branch(delta1, delta2, esr_full_splitting);

  ExtractedParams out;
  out.delta_omega.value = s.delta;
  out.j12_abs.value = s.j12;
  out.a_diff.value = s.a_diff;
  out.a_sum_bound = std::abs(d4_bound);
  // A1+A2 is only bounded; report the midpoint 0 with the bound as CI.
  out.a1 = ValueCi{s.a_diff / 2.0, out.a_sum_bound / 2.0};
  out.a2 = ValueCi{-s.a_diff / 2.0, out.a_sum_bound / 2.0};
  // The sign images (J -> -J, and the a_diff<0 family with delta -> -delta)
  // are rejected by the delta >= 0, J >= 0 convention.
  out.discarded_branches = 3;

  if (delta1_ci || delta2_ci || splitting_ci) {
    const double s1 = delta1_ci ? delta1_ci->ci95 : 0.0;
    const double s2 = delta2_ci ? delta2_ci->ci95 : 0.0;
    const double s3 = splitting_ci ? splitting_ci->ci95 : 0.0;
    const double h1 = std::max(1e-6, 1e-6 * delta1);
    const double h2 = std::max(1e-6, 1e-6 * delta2);
    const double h3 = std::max(1e-6, 1e-6 * esr_full_splitting);
    const auto fd = [&](int which, double h) {
      const double dd1 = which == 0 ? h : 0.0;
      const double dd2 = which == 1 ? h : 0.0;
      const double dd3 = which == 2 ? h : 0.0;
      const Solution up = solve_branch(delta1 + dd1, delta2 + dd2, esr_full_splitting + dd3);
      const Solution dn = solve_branch(delta1 - dd1, delta2 - dd2, esr_full_splitting - dd3);
      return std::array<double, 3>{(up.delta - dn.delta) / (2.0 * h),
                                   (up.j12 - dn.j12) / (2.0 * h),
                                   (up.a_diff - dn.a_diff) / (2.0 * h)};
    };
    const auto g1 = fd(0, h1), g2 = fd(1, h2), g3 = fd(2, h3);
    const auto quad = [&](int k) {
      return std::sqrt(g1[k] * g1[k] * s1 * s1 + g2[k] * g2[k] * s2 * s2 +
                       g3[k] * g3[k] * s3 * s3);
    };
    out.delta_omega.ci95 = quad(0);
    out.j12_abs.ci95 = quad(1);
    out.a_diff.ci95 = quad(2);
    out.a1.ci95 = std::hypot(out.a_diff.ci95 / 2.0, out.a_sum_bound / 2.0);
    out.a2.ci95 = out.a1.ci95;
  }
  return out;
}

}  // namespace spinlab
