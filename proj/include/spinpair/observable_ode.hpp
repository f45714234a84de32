#pragma once

#include <array>
#include <string>

#include "spinpair/hamiltonians.hpp"

namespace spinpair {

using Matrix9 = Eigen::Matrix<double, 9, 9>;
using Vector9 = Eigen::Vector<double, 9>;

// Ordering of the coupled symmetric observables in the 9-variable system.
enum ObservableIndex : int {
  oMz = 0,
  oMx,
  oMy,
  oMzz,
  oMxx,
  oMyy,
  oMzx,
  oMzy,
  oMxy,
};

extern const std::array<std::string, 9> kObservableLabels;
// Position of each observable's operator in TwoSpinBasis::standard().
extern const std::array<int, 9> kObservableBasisIndex;

// dM/dt = matrix * M for M = (Mz, Mx, My, Mzz, Mxx, Myy, Mzx, Mzy, Mxy).
struct CoefficientMatrix9 {
  Matrix9 matrix;
  PhysicalParams params;
};

// Closed three-variable system over (Mx, W, Mzy) with W = Mzz - Myy.
struct CoefficientMatrix3 {
  Eigen::Matrix3d matrix;
  PhysicalParams params;
};

// Projects the generator onto the symmetric observable sector by solving the
// Gram system for Tr[F_a L(F_b)]. Throws ClosureViolation if the generator
// couples the nine observables to the identity or antisymmetric sector (or
// leaves an imaginary residue) beyond 1e-10 in absolute value.
CoefficientMatrix9 project_generator(const Liouvillian& l, const TwoSpinBasis& basis);

// The same matrix written out entry by entry in closed form.
CoefficientMatrix9 analytic_coefficients9(const PhysicalParams& p);

// Closed form of the reduced three-variable generator.
Eigen::Matrix3d analytic_coefficients3(const PhysicalParams& p);

// Restricts a 9-variable system to (Mx, W, Mzy). Throws ReductionLeak if the
// three rows couple to anything outside {Mx, Mzz, Myy, Mzy} or if the Mzz and
// Myy columns fail to enter only through their difference (tolerance 1e-10).
CoefficientMatrix3 reduce_to_locked(const CoefficientMatrix9& system);

// Plain-text matrix serialization: one row per line, entries separated by
// single spaces, full precision. matrix_from_text() inverts it.
std::string to_text(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_text(const std::string& text);

}  // namespace spinpair
