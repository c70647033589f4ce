#include "spinlab/cluster_params.hpp"

#include <cmath>

#include "spinlab/constants.hpp"

namespace spinlab {

void ClusterParams::validate() const {
  for (double v : {a1_mhz, a2_mhz, j12_mhz, omega1_mhz, omega2_mhz, b0_gauss}) {
    if (!std::isfinite(v)) {
      throw ParamsError("ClusterParams: all fields must be finite");
    }
  }
}

void to_json(nlohmann::json& j, const ClusterParams& p) {
  j = nlohmann::json{{"a1_mhz", p.a1_mhz},         {"a2_mhz", p.a2_mhz},
                     {"j12_mhz", p.j12_mhz},       {"omega1_mhz", p.omega1_mhz},
                     {"omega2_mhz", p.omega2_mhz}, {"b0_gauss", p.b0_gauss}};
}

void from_json(const nlohmann::json& j, ClusterParams& p) {
  j.at("a1_mhz").get_to(p.a1_mhz);
  j.at("a2_mhz").get_to(p.a2_mhz);
  j.at("j12_mhz").get_to(p.j12_mhz);
  j.at("omega1_mhz").get_to(p.omega1_mhz);
  j.at("omega2_mhz").get_to(p.omega2_mhz);
  p.b0_gauss = j.value("b0_gauss", 0.0);
  p.validate();
}

ClusterParams default_cluster() {
  return ClusterParams{0.81, -0.86, 0.38, 0.14, 0.0, 694.0};
}

double dipolar_coupling(const SpinGeometry& geom, DipoleKind kind) {
  if (!(geom.r_nm > 0.0)) {
    throw GeometryError("dipolar_coupling: r must be > 0");
  }
  const double c = std::cos(geom.theta_rad);
  const double angular = 3.0 * c * c - 1.0;
  const double full = -constants::dipolar_prefactor_mhz_nm3() * angular /
                      (geom.r_nm * geom.r_nm * geom.r_nm);
  return kind == DipoleKind::kNvToDark ? full : 0.5 * full;
}

}  // namespace spinlab
