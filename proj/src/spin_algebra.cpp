#include "spinpair/spin_algebra.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <sstream>

namespace spinpair {

namespace {

constexpr double kRealityTol = 1e-12;

Eigen::Matrix2cd half_pauli(char axis) {
  Eigen::Matrix2cd m;
  const Complex i(0.0, 1.0);
  switch (axis) {
    case 'x':
      m << 0.0, 0.5, 0.5, 0.0;
      break;
    case 'y':
      m << 0.0, -0.5 * i, 0.5 * i, 0.0;
      break;
    default:
      m << 0.5, 0.0, 0.0, -0.5;
      break;
  }
  return m;
}

}  // namespace

SpinOperators build_spin_operators() {
  const Eigen::Matrix2cd id2 = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd hx = half_pauli('x');
  const Eigen::Matrix2cd hy = half_pauli('y');
  const Eigen::Matrix2cd hz = half_pauli('z');

  SpinOperators ops;
  ops.identity = Operator::Identity();
  ops.ix = kroneckerProduct(hx, id2);
  ops.iy = kroneckerProduct(hy, id2);
  ops.iz = kroneckerProduct(hz, id2);
  ops.sx = kroneckerProduct(id2, hx);
  ops.sy = kroneckerProduct(id2, hy);
  ops.sz = kroneckerProduct(id2, hz);
  ops.fx = ops.ix + ops.sx;
  ops.fy = ops.iy + ops.sy;
  ops.fz = ops.iz + ops.sz;
  ops.fzz = ops.iz * ops.sz;
  ops.fxx = ops.ix * ops.sx;
  ops.fyy = ops.iy * ops.sy;
  ops.fzx = ops.iz * ops.sx + ops.ix * ops.sz;
  ops.fzy = ops.iz * ops.sy + ops.iy * ops.sz;
  ops.fxy = ops.ix * ops.sy + ops.iy * ops.sx;
  return ops;
}

const SpinOperators& spin_operators() {
  static const SpinOperators ops = build_spin_operators();
  return ops;
}

const TwoSpinBasis& TwoSpinBasis::standard() {
  static const TwoSpinBasis basis = [] {
    const SpinOperators& ops = spin_operators();
    TwoSpinBasis b;
    b.elements = {ops.identity,
                  ops.fx,
                  ops.fy,
                  ops.fz,
                  ops.fzz,
                  ops.fxx,
                  ops.fyy,
                  ops.fzx,
                  ops.fzy,
                  ops.fxy,
                  ops.ix - ops.sx,
                  ops.iy - ops.sy,
                  ops.iz - ops.sz,
                  ops.iz * ops.sx - ops.ix * ops.sz,
                  ops.iz * ops.sy - ops.iy * ops.sz,
                  ops.ix * ops.sy - ops.iy * ops.sx};
    b.labels = {"1",  "Fx",  "Fy",  "Fz",  "Fzz", "Fxx", "Fyy", "Fzx",
                "Fzy", "Fxy", "Ax",  "Ay",  "Az",  "Gzx", "Gzy", "Gxy"};
    for (int a = 0; a < 16; ++a) {
      for (int c = 0; c < 16; ++c) {
        const Complex t = (b.elements[a].adjoint() * b.elements[c]).trace();
        b.gram(a, c) = t.real();
      }
    }
    return b;
  }();
  return basis;
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

SuperVector vectorize(const Operator& op) {
  return Eigen::Map<const SuperVector>(op.data());
}

Operator unvectorize(const SuperVector& v) {
  return Eigen::Map<const Operator>(v.data());
}

SuperMatrix adjoint_action(const Operator& h) {
  // vec([h, X]) = (1 (x) h - h^T (x) 1) vec(X) for column-stacked vec.
  const Operator id = Operator::Identity();
  SuperMatrix m = kroneckerProduct(id, h);
  m -= SuperMatrix(kroneckerProduct(h.transpose(), id));
  return m;
}

Coefficients16 expand_in_basis(const Operator& op, const TwoSpinBasis& basis) {
  Eigen::Vector<Complex, 16> overlaps;
  for (int a = 0; a < 16; ++a) {
    overlaps(a) = (basis.elements[a].adjoint() * op).trace();
  }
  const double scale = std::max(overlaps.cwiseAbs().maxCoeff(), 1.0);
  if (overlaps.imag().cwiseAbs().maxCoeff() > kRealityTol * scale) {
    std::ostringstream msg;
    msg << "operator has non-Hermitian content: max imaginary overlap "
        << overlaps.imag().cwiseAbs().maxCoeff();
    throw NonHermitianObservable(msg.str());
  }
  // Gram matrix is diagonal for the standard basis but solve generally.
  return basis.gram.ldlt().solve(overlaps.real());
}

Coefficients16 expand_in_basis(const DensityState& state, const TwoSpinBasis& basis) {
  return expand_in_basis(state.op, basis);
}

double expectation(const Operator& obs, const Operator& rho) {
  const Complex t = (obs * rho).trace();
  const double scale = std::max({std::abs(t), obs.cwiseAbs().maxCoeff(), 1.0});
  if (std::abs(t.imag()) > kRealityTol * scale) {
    std::ostringstream msg;
    msg << "expectation value has imaginary part " << t.imag()
        << "; observable is not Hermitian (or state is not)";
    throw NonHermitianObservable(msg.str());
  }
  return t.real();
}

double expectation(const Operator& obs, const DensityState& state) {
  return expectation(obs, state.op);
}

}  // namespace spinpair
