#pragma once

#include <json.hpp>

#include "spinlab/errors.hpp"

namespace spinlab {

// The five Hamiltonian parameters of one NV + two-dark-spin cluster, plus
// the static bias field. This is the single source of truth for a simulated
// system and the interchange schema between every module and the CLI.
//
// omega1/omega2 are stored in a frame rotating at the dark-spin carrier
// (so omega2 = 0 by convention for the bundled cluster); absolute dark-spin
// frequencies gamma_e*B0 + omega_i are used only by the Zeeman scan and the
// DEER frequency axis. The sign of j12 is stored but is not determined by
// any bundled observable (all certified spectra are even in j12).
struct ClusterParams {
  double a1_mhz = 0.0;      // dark spin 1 <-> NV coupling
  double a2_mhz = 0.0;      // dark spin 2 <-> NV coupling
  double j12_mhz = 0.0;     // half the dark-spin pair dipolar strength
  double omega1_mhz = 0.0;  // dark spin 1 Zeeman offset in the rotating frame
  double omega2_mhz = 0.0;  // dark spin 2 Zeeman offset
  double b0_gauss = 0.0;    // static bias field

  void validate() const;  // throws ParamsError on non-finite fields

  double delta_omega() const { return omega1_mhz - omega2_mhz; }
  double a_diff() const { return a1_mhz - a2_mhz; }
  double a_sum() const { return a1_mhz + a2_mhz; }

  bool operator==(const ClusterParams&) const = default;
};

void to_json(nlohmann::json& j, const ClusterParams& p);
void from_json(const nlohmann::json& j, ClusterParams& p);

// Bundled demonstration cluster (used by the `figures` command and tests).
ClusterParams default_cluster();

struct SpinGeometry {
  double r_nm = 0.0;       // inter-spin distance, > 0
  double theta_rad = 0.0;  // polar angle from the quantization axis, [0, pi]
};

enum class DipoleKind { kNvToDark, kDarkToDark };

// Secular point-dipole coupling for the given geometry, MHz.
// kNvToDark returns -prefactor*(3cos^2(theta)-1)/r^3 (the A_i convention);
// kDarkToDark returns half that (the J12 convention).
double dipolar_coupling(const SpinGeometry& geom, DipoleKind kind);

}  // namespace spinlab
