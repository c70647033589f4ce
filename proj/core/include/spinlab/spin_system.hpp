#pragma once

#include <Eigen/Dense>
#include <complex>

#include "spinlab/cluster_params.hpp"

// Operators and states on the 2x2x2 product space |NV> (x) |s1> (x) |s2>.
// NV basis order (|0>, |-1>), dark-spin basis (|up>, |down>); basis index
// is 4*nv + 2*s1 + s2. The NV is a two-level pseudo-spin: the projector
// (Sz_NV + I/2) equals 0 on |0> and 1 on |-1>, so dark spins feel the A_i
// gradient only in |-1>.
namespace spinlab {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Matrix8c = Eigen::Matrix<std::complex<double>, 8, 8>;

namespace ops {

Matrix2c sx();  // spin-1/2 operators, entries +-1/2
Matrix2c sy();
Matrix2c sz();
Matrix2c id2();
Matrix2c p0();   // |0><0| on the NV factor
Matrix2c pm1();  // |-1><-1|

Matrix8c kron3(const Matrix2c& nv, const Matrix2c& s1, const Matrix2c& s2);

// Embedded single-spin operators on the 8-dim space.
const Matrix8c& sz1();
const Matrix8c& sz2();
const Matrix8c& sx1();
const Matrix8c& sx2();
const Matrix8c& sx_nv();     // pseudo-spin-1/2 x on the NV factor
const Matrix8c& sy_nv();
const Matrix8c& sz_nv();     // diag(-1/2, +1/2) per NV basis order
const Matrix8c& p0_nv();     // |0><0|_NV (x) I
const Matrix8c& pm1_nv();
const Matrix8c& sz_dark_total();  // Sz(1) + Sz(2)

}  // namespace ops

struct Hamiltonian {
  Matrix8c matrix;  // MHz, Hermitian, commutes with Sz(1)+Sz(2)
};

struct SpinState {
  Matrix8c rho;

  // trace = 1, Hermitian, eigenvalues >= -1e-10
  void validate(double tol = 1e-9) const;
  double purity() const;
};

// Secular-frame cluster Hamiltonian: (omega_i + A_i P_-1) Sz(i) per dark
// spin, Ising term 2 J12 Sz(1)Sz(2), and flip-flop -J12/2 between |ud> and
// |du>.
Hamiltonian build_hamiltonian(const ClusterParams& params);

// U = exp(-i 2pi H t), via eigendecomposition of the Hermitian matrix.
Matrix8c propagator(const Hamiltonian& h, double t_us);

// rho -> U rho U^dagger. Rejects U with ||U^dagger U - I|| > 1e-8.
SpinState evolve(const SpinState& state, const Matrix8c& u);

// |0><0|_NV (x) I/4: NV polarized, dark spins maximally mixed.
SpinState nv_polarized_state();

// Assemble a product state from an NV 2x2 and a dark-pair 4x4 density matrix.
SpinState product_state(const Matrix2c& nv, const Matrix4c& dark);

// Reduced dark-pair state, Tr_NV(rho).
Matrix4c partial_trace_nv(const SpinState& state);

// NV |0> population, Tr(P0 rho).
double nv_population(const SpinState& state);

double frobenius_distance_to_unitary(const Matrix8c& u);
bool is_hermitian(const Matrix8c& m, double tol = 1e-12);

}  // namespace spinlab
