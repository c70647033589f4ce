#pragma once

#include <stdexcept>
#include <string>

namespace spinlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// r = 0 or otherwise unusable spin geometry.
struct GeometryError : Error {
  using Error::Error;
};

// Invalid ClusterParams (non-finite fields).
struct ParamsError : Error {
  using Error::Error;
};

// evolve() rejects operators that are not unitary.
struct NonUnitaryError : Error {
  using Error::Error;
};

// Malformed pulse sequence (no readout markers, bad step payload).
struct SequenceError : Error {
  using Error::Error;
};

// contrast() with y1 + y2 = 0.
struct ContrastError : Error {
  using Error::Error;
};

// Sweep grid too coarse for the expected signal content.
struct NyquistError : Error {
  using Error::Error;
};

// Frequency components merge (D1*D2 = 0); amplitudes undefined.
struct DegenerateSpectrumError : Error {
  using Error::Error;
};

// Parameter extraction has no real solution (D1^2 < delta^2).
struct NoRealSolutionError : Error {
  using Error::Error;
};

// Signal/Spectrum grid violates its invariants (non-uniform, not increasing).
struct GridError : Error {
  using Error::Error;
};

// CSV / JSON parse failures.
struct IoError : Error {
  using Error::Error;
};

}  // namespace spinlab
