#include "spinlab/spin_system.hpp"

#include <numbers>

namespace spinlab {

using namespace std::complex_literals;

namespace ops {

Matrix2c sx() {
  Matrix2c m;
  m << 0.0, 0.5, 0.5, 0.0;
  return m;
}

Matrix2c sy() {
  Matrix2c m;
  m << 0.0, -0.5i, 0.5i, 0.0;
  return m;
}

Matrix2c sz() {
  Matrix2c m;
  m << 0.5, 0.0, 0.0, -0.5;
  return m;
}

Matrix2c id2() { return Matrix2c::Identity(); }

Matrix2c p0() {
  Matrix2c m = Matrix2c::Zero();
  m(0, 0) = 1.0;
  return m;
}

Matrix2c pm1() {
  Matrix2c m = Matrix2c::Zero();
  m(1, 1) = 1.0;
  return m;
}

Matrix8c kron3(const Matrix2c& nv, const Matrix2c& s1, const Matrix2c& s2) {
  Matrix4c inner = Matrix4c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      inner.block<2, 2>(2 * i, 2 * j) = s1(i, j) * s2;
  Matrix8c out = Matrix8c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<4, 4>(4 * i, 4 * j) = nv(i, j) * inner;
  return out;
}

const Matrix8c& sz1() {
  static const Matrix8c m = kron3(id2(), sz(), id2());
  return m;
}
const Matrix8c& sz2() {
  static const Matrix8c m = kron3(id2(), id2(), sz());
  return m;
}
const Matrix8c& sx1() {
  static const Matrix8c m = kron3(id2(), sx(), id2());
  return m;
}
const Matrix8c& sx2() {
  static const Matrix8c m = kron3(id2(), id2(), sx());
  return m;
}
const Matrix8c& sx_nv() {
  static const Matrix8c m = kron3(sx(), id2(), id2());
  return m;
}
const Matrix8c& sy_nv() {
  static const Matrix8c m = kron3(sy(), id2(), id2());
  return m;
}
const Matrix8c& sz_nv() {
  // NV basis order is (|0>, |-1>), and (Sz_NV + I/2) must project onto |-1>.
  static const Matrix8c m = kron3(-sz(), id2(), id2());
  return m;
}
const Matrix8c& p0_nv() {
  static const Matrix8c m = kron3(p0(), id2(), id2());
  return m;
}
const Matrix8c& pm1_nv() {
  static const Matrix8c m = kron3(pm1(), id2(), id2());
  return m;
}
const Matrix8c& sz_dark_total() {
  static const Matrix8c m = sz1() + sz2();
  return m;
}

}  // namespace ops

void SpinState::validate(double tol) const {
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol) {
    throw Error("SpinState: trace must be 1");
  }
  if (!is_hermitian(rho, tol)) {
    throw Error("SpinState: density matrix must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix8c> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw Error("SpinState: density matrix must be positive semidefinite");
  }
}

double SpinState::purity() const { return (rho * rho).trace().real(); }

Hamiltonian build_hamiltonian(const ClusterParams& params) {
  params.validate();
  using namespace ops;
  const Matrix2c zeeman1 = params.omega1_mhz * id2() + params.a1_mhz * pm1();
  const Matrix2c zeeman2 = params.omega2_mhz * id2() + params.a2_mhz * pm1();

  Matrix2c sp;  // S+ for spin 1/2
  sp << 0.0, 1.0, 0.0, 0.0;
  const Matrix2c sm = sp.adjoint();

  Matrix8c h = kron3(zeeman1, sz(), id2()) + kron3(zeeman2, id2(), sz()) +
               params.j12_mhz * (2.0 * kron3(id2(), sz(), sz()) -
                                 0.5 * (kron3(id2(), sp, sm) + kron3(id2(), sm, sp)));
  return Hamiltonian{std::move(h)};
}

Matrix8c propagator(const Hamiltonian& h, double t_us) {
  if (t_us < 0.0) {
    throw Error("propagator: t must be >= 0");
  }
  Eigen::SelfAdjointEigenSolver<Matrix8c> es(h.matrix);
  Eigen::Matrix<std::complex<double>, 8, 1> phases;
  for (int k = 0; k < 8; ++k) {
    const double angle = -2.0 * std::numbers::pi * es.eigenvalues()[k] * t_us;
    phases[k] = std::polar(1.0, angle);
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

SpinState evolve(const SpinState& state, const Matrix8c& u) {
  if (frobenius_distance_to_unitary(u) > 1e-8) {
    throw NonUnitaryError("evolve: operator is not unitary");
  }
  return SpinState{u * state.rho * u.adjoint()};
}

SpinState nv_polarized_state() {
  return product_state(ops::p0(), Matrix4c::Identity() / 4.0);
}

SpinState product_state(const Matrix2c& nv, const Matrix4c& dark) {
  Matrix8c rho = Matrix8c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      rho.block<4, 4>(4 * i, 4 * j) = nv(i, j) * dark;
  return SpinState{std::move(rho)};
}

Matrix4c partial_trace_nv(const SpinState& state) {
  return state.rho.block<4, 4>(0, 0) + state.rho.block<4, 4>(4, 4);
}

double nv_population(const SpinState& state) {
  return state.rho.block<4, 4>(0, 0).trace().real();
}

double frobenius_distance_to_unitary(const Matrix8c& u) {
  return (u.adjoint() * u - Matrix8c::Identity()).norm();
}

bool is_hermitian(const Matrix8c& m, double tol) {
  return (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

}  // namespace spinlab
