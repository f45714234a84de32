#include "spinpair/observable_ode.hpp"

#include <cmath>
#include <sstream>

namespace spinpair {

const std::array<std::string, 9> kObservableLabels = {
    "Mz", "Mx", "My", "Mzz", "Mxx", "Myy", "Mzx", "Mzy", "Mxy"};

const std::array<int, 9> kObservableBasisIndex = {kFz,  kFx,  kFy,  kFzz, kFxx,
                                                  kFyy, kFzx, kFzy, kFxy};

namespace {

// Absolute gate on projection residues, in the rad/s units of the generator.
constexpr double kSectorTol = 1e-10;

bool in_symmetric_sector(int basis_index) {
  return basis_index >= kFx && basis_index <= kFxy;
}

}  // namespace

CoefficientMatrix9 project_generator(const Liouvillian& l, const TwoSpinBasis& basis) {
  Eigen::Matrix<Complex, 16, 16> p;
  for (int a = 0; a < 16; ++a) {
    p.col(a) = vectorize(basis.elements[a]);
  }
  // overlaps(a, b) = Tr[F_a^dag L(F_b)]. The expectation values obey
  // d<F_a>/dt = sum_b overlaps(a, b) <F_b> / gram(b, b): expanding rho over
  // the basis divides by the norm of the column observable, so the generator
  // in expectation-value space is overlaps * gram^-1.
  const Eigen::Matrix<Complex, 16, 16> overlaps = p.adjoint() * l.matrix * p;
  const Eigen::Matrix<Complex, 16, 16> coeffs =
      basis.gram.cast<Complex>()
          .ldlt()
          .solve(overlaps.transpose())
          .transpose();

  const double imag_residue = coeffs.imag().cwiseAbs().maxCoeff();
  if (imag_residue > kSectorTol) {
    std::ostringstream msg;
    msg << "projection left an imaginary residue of " << imag_residue << " rad/s";
    throw ClosureViolation(msg.str());
  }

  double leak = 0.0;
  int leak_row = 0, leak_col = 0;
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      if (in_symmetric_sector(a) == in_symmetric_sector(b)) continue;
      const double v = std::abs(coeffs(a, b).real());
      if (v > leak) {
        leak = v;
        leak_row = a;
        leak_col = b;
      }
    }
  }
  if (leak > kSectorTol) {
    std::ostringstream msg;
    msg << "generator couples " << basis.labels[leak_col] << " to "
        << basis.labels[leak_row] << " with strength " << leak
        << " rad/s; the nine-observable system does not close";
    throw ClosureViolation(msg.str());
  }

  CoefficientMatrix9 system;
  system.params = l.params;
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      system.matrix(i, j) =
          coeffs(kObservableBasisIndex[i], kObservableBasisIndex[j]).real();
    }
  }
  return system;
}

CoefficientMatrix9 analytic_coefficients9(const PhysicalParams& p) {
  p.validate();
  const double w1 = p.omega1;
  const double wd = p.omega_d;
  const double tc = p.tau_c;

  Matrix9 a = Matrix9::Zero();
  a(oMz, oMz) = -w1 * w1 * tc;
  a(oMz, oMy) = w1;
  a(oMz, oMzx) = 3.0 * w1 * wd * tc;

  a(oMx, oMx) = -9.0 / 4.0 * wd * wd * tc;
  a(oMx, oMzz) = 6.0 * w1 * wd * tc;
  a(oMx, oMyy) = -6.0 * w1 * wd * tc;
  a(oMx, oMzy) = -3.0 * wd;

  a(oMy, oMz) = -w1;
  a(oMy, oMy) = -(w1 * w1 + 9.0 / 4.0 * wd * wd) * tc;
  a(oMy, oMzx) = 3.0 * wd;
  a(oMy, oMxy) = 3.0 * w1 * wd * tc;

  a(oMzz, oMx) = 3.0 / 4.0 * w1 * wd * tc;
  a(oMzz, oMzz) = -2.0 * w1 * w1 * tc;
  a(oMzz, oMyy) = 2.0 * w1 * w1 * tc;
  a(oMzz, oMzy) = w1;

  // Mxx is conserved: its row vanishes identically.

  a(oMyy, oMx) = -3.0 / 4.0 * w1 * wd * tc;
  a(oMyy, oMzz) = 2.0 * w1 * w1 * tc;
  a(oMyy, oMyy) = -2.0 * w1 * w1 * tc;
  a(oMyy, oMzy) = -w1;

  a(oMzx, oMz) = 3.0 / 4.0 * w1 * wd * tc;
  a(oMzx, oMy) = -3.0 / 4.0 * wd;
  a(oMzx, oMzx) = -(w1 * w1 + 9.0 / 4.0 * wd * wd) * tc;
  a(oMzx, oMxy) = w1;

  a(oMzy, oMx) = 3.0 / 4.0 * wd;
  a(oMzy, oMzz) = -2.0 * w1;
  a(oMzy, oMyy) = 2.0 * w1;
  a(oMzy, oMzy) = -(4.0 * w1 * w1 + 9.0 / 4.0 * wd * wd) * tc;

  a(oMxy, oMy) = 3.0 / 4.0 * w1 * wd * tc;
  a(oMxy, oMzx) = -w1;
  a(oMxy, oMxy) = -w1 * w1 * tc;

  return CoefficientMatrix9{a, p};
}

Eigen::Matrix3d analytic_coefficients3(const PhysicalParams& p) {
  p.validate();
  const double w1 = p.omega1;
  const double wd = p.omega_d;
  const double tc = p.tau_c;
  Eigen::Matrix3d a;
  a << -9.0 / 4.0 * wd * wd * tc, 6.0 * w1 * wd * tc, -3.0 * wd,
      3.0 / 2.0 * w1 * wd * tc, -4.0 * w1 * w1 * tc, 2.0 * w1,
      3.0 / 4.0 * wd, -2.0 * w1, -(4.0 * w1 * w1 + 9.0 / 4.0 * wd * wd) * tc;
  return a;
}

CoefficientMatrix3 reduce_to_locked(const CoefficientMatrix9& system) {
  const Matrix9& a = system.matrix;
  Eigen::Matrix<double, 3, 9> rows;
  rows.row(0) = a.row(oMx);
  rows.row(1) = a.row(oMzz) - a.row(oMyy);
  rows.row(2) = a.row(oMzy);

  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 9; ++j) {
      if (j == oMx || j == oMzz || j == oMyy || j == oMzy) continue;
      if (std::abs(rows(i, j)) > kSectorTol) {
        std::ostringstream msg;
        msg << "locked-sector row " << i << " couples to " << kObservableLabels[j]
            << " with strength " << rows(i, j) << " rad/s";
        throw ReductionLeak(msg.str());
      }
    }
    // Mzz and Myy may only enter through their difference W.
    const double sum = rows(i, oMzz) + rows(i, oMyy);
    if (std::abs(sum) > kSectorTol) {
      std::ostringstream msg;
      msg << "locked-sector row " << i
          << " sees Mzz + Myy with strength " << sum << " rad/s";
      throw ReductionLeak(msg.str());
    }
  }

  CoefficientMatrix3 reduced;
  reduced.params = system.params;
  for (int i = 0; i < 3; ++i) {
    reduced.matrix(i, 0) = rows(i, oMx);
    reduced.matrix(i, 1) = (rows(i, oMzz) - rows(i, oMyy)) / 2.0;
    reduced.matrix(i, 2) = rows(i, oMzy);
  }
  return reduced;
}

std::string to_text(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << m(r, c);
    }
    out << '\n';
  }
  return out.str();
}

Eigen::MatrixXd matrix_from_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::vector<double> row;
    double v;
    while (fields >> v) row.push_back(v);
    if (!fields.eof()) {
      throw std::invalid_argument("matrix text contains a non-numeric field");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("matrix text has ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rows[r][c];
    }
  }
  return m;
}

}  // namespace spinpair
