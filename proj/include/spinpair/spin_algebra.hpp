#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>

#include "spinpair/errors.hpp"

namespace spinpair {

using Complex = std::complex<double>;

// Operators act on the 4-dimensional product space of two spin-1/2 particles.
using Operator = Eigen::Matrix4cd;

// Superoperators act on column-vectorized operators.
using SuperMatrix = Eigen::Matrix<Complex, 16, 16>;
using SuperVector = Eigen::Vector<Complex, 16>;

using Coefficients16 = Eigen::Vector<double, 16>;
using GramMatrix = Eigen::Matrix<double, 16, 16>;

// Cartesian spin components for both particles plus the nine symmetric
// bilinear/collective combinations the dynamics couples.
struct SpinOperators {
  Operator identity;
  Operator ix, iy, iz;  // first spin
  Operator sx, sy, sz;  // second spin
  Operator fx, fy, fz;  // collective F_a = I_a + S_a
  Operator fzz, fxx, fyy;  // F_aa = I_a S_a
  Operator fzx, fzy, fxy;  // F_ab = I_a S_b + I_b S_a
};

SpinOperators build_spin_operators();
const SpinOperators& spin_operators();

// Hermitian operator basis spanning the full 16-dimensional operator space:
// identity, three collective components, six symmetric bilinears, then the
// six antisymmetric partners that the symmetric sector never couples to.
struct TwoSpinBasis {
  std::array<Operator, 16> elements;
  std::array<std::string, 16> labels;
  GramMatrix gram;  // gram(a,b) = Tr[elements[a]^dag elements[b]]

  static const TwoSpinBasis& standard();
};

// Indices into TwoSpinBasis::elements for the standard basis.
enum BasisIndex : int {
  kIdentity = 0,
  kFx,
  kFy,
  kFz,
  kFzz,
  kFxx,
  kFyy,
  kFzx,
  kFzy,
  kFxy,
  kAx,   // I_x - S_x
  kAy,
  kAz,
  kGzx,  // I_z S_x - I_x S_z
  kGzy,
  kGxy,
};

struct DensityState {
  Operator op;
  double time = 0.0;
};

Operator commutator(const Operator& a, const Operator& b);

// Column-stacked vectorization and its inverse.
SuperVector vectorize(const Operator& op);
Operator unvectorize(const SuperVector& v);

// Matrix of X -> [h, X] acting on column-vectorized operators.
SuperMatrix adjoint_action(const Operator& h);

// Coefficients c with op = sum_a c_a * basis.elements[a]; exact for any
// Hermitian operator since the basis spans the full space.
Coefficients16 expand_in_basis(const Operator& op, const TwoSpinBasis& basis);
Coefficients16 expand_in_basis(const DensityState& state, const TwoSpinBasis& basis);

// Tr[obs * rho], checked to be real to within 1e-12.
double expectation(const Operator& obs, const Operator& rho);
double expectation(const Operator& obs, const DensityState& state);

}  // namespace spinpair
