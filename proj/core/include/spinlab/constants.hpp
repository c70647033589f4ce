#pragma once

#include <cmath>
#include <numbers>

// Unit conventions used throughout: energies and frequencies in MHz (H/h),
// times in microseconds, magnetic fields in gauss. Factors of 2*pi appear
// only inside propagators and rotations.
namespace spinlab::constants {

// Electron gyromagnetic ratio, |gamma_e|/2pi, in MHz per gauss (g = 2.0023).
inline constexpr double kGammaEMhzPerGauss = 2.8024;

// NV ground-state zero-field splitting, MHz. Default for Zeeman scans.
inline constexpr double kNvZfsMhz = 2870.0;

// CODATA inputs for the dipolar prefactor.
inline constexpr double kMu0 = 1.25663706212e-6;           // T^2 m^3 / J
inline constexpr double kHbar = 1.054571817e-34;           // J s
inline constexpr double kGammaERadPerSecTesla = 1.76085963023e11;

// mu0 * hbar * gamma_e^2 / (4 pi) expressed as a frequency prefactor,
// MHz nm^3: the point-dipole coupling of two electron spins at distance
// r nm is prefactor * (3 cos^2 theta - 1) / r^3 (about 52.04 MHz nm^3).
inline double dipolar_prefactor_mhz_nm3() {
  const double hz_m3 = kMu0 / (4.0 * std::numbers::pi) * kHbar *
                       kGammaERadPerSecTesla * kGammaERadPerSecTesla /
                       (2.0 * std::numbers::pi);
  return hz_m3 * 1e27 / 1e6;
}

// Ratio of the NV |0> <-> |-1> drive matrix element to the S=1/2 element.
// For S=1, |<-1|Sx|0>| = 1/sqrt(2); for S=1/2 it is 1/2. Equal drive field
// amplitude therefore drives the NV pseudo-spin sqrt(2) times faster.
inline double nv_halfspin_drive_scale() {
  const double s1_element = 1.0 / std::sqrt(2.0);   // <m-1|Sx|m> = sqrt(S(S+1)-m(m-1))/2 at S=1, m=0
  const double half_element = 0.5;
  return s1_element / half_element;
}

}  // namespace spinlab::constants
