#include "spinpair/hamiltonians.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spinpair {

void PhysicalParams::validate() const {
  const double fields[] = {omega1, omega_d, tau_c, m0, delta_omega, omega0};
  for (double f : fields) {
    if (!std::isfinite(f)) {
      throw std::invalid_argument("physical parameters must be finite");
    }
  }
  if (tau_c < 0.0) {
    throw std::invalid_argument("tau_c must be non-negative");
  }
  if (omega0 < 0.0) {
    throw std::invalid_argument("omega0 must be non-negative (0 = unspecified)");
  }
  if (!(m0 > 0.0) || m0 > 1.0) {
    std::ostringstream msg;
    msg << "m0 = " << m0 << " outside (0, 1]";
    throw InvalidM0(msg.str());
  }
}

double omega_d_from_geometry(const Geometry& geo) {
  if (!(geo.r > 0.0)) {
    throw std::invalid_argument("internuclear distance must be positive");
  }
  if (!(geo.theta >= 0.0) || geo.theta > std::numbers::pi) {
    throw std::invalid_argument("theta must lie in [0, pi]");
  }
  const double c = std::cos(geo.theta);
  const double y20 = std::sqrt(5.0 / (16.0 * std::numbers::pi)) * (3.0 * c * c - 1.0);
  return geo.gamma * geo.gamma / (geo.r * geo.r * geo.r) * y20;
}

Operator secular_dipolar(const PhysicalParams& p) {
  const SpinOperators& ops = spin_operators();
  return p.omega_d * (2.0 * ops.fzz - ops.fxx - ops.fyy);
}

Operator drive_rotating(const PhysicalParams& p) {
  if (p.delta_omega != 0.0) {
    std::ostringstream msg;
    msg << "off-resonant drive (delta_omega = " << p.delta_omega
        << ") is not supported; only the resonant locking field is implemented";
    throw UnsupportedOffResonance(msg.str());
  }
  return p.omega1 * spin_operators().fx;
}

Operator Liouvillian::apply(const Operator& x) const {
  return unvectorize(matrix * vectorize(x));
}

Liouvillian build_liouvillian(const PhysicalParams& p) {
  p.validate();
  const Operator hs = drive_rotating(p);
  const Operator hd = secular_dipolar(p);
  const SuperMatrix cs = adjoint_action(hs);
  const SuperMatrix cd = adjoint_action(hd);

  Liouvillian l;
  l.params = p;
  l.first_order = Complex(0.0, -1.0) * (cs + cd);
  l.drive_drive = -p.tau_c * cs * cs;
  l.drive_dipole = -p.tau_c * cs * cd;
  l.dipole_drive = -p.tau_c * cd * cs;
  l.dipole_dipole = -p.tau_c * cd * cd;
  l.matrix = l.first_order + l.drive_drive + l.drive_dipole + l.dipole_drive +
             l.dipole_dipole;
  return l;
}

std::vector<std::string> validate_regime(const PhysicalParams& p) {
  std::vector<std::string> warnings;
  std::ostringstream msg;
  msg.precision(3);

  const double drive_product = std::abs(p.omega1) * p.tau_c;
  if (drive_product >= 0.1) {
    msg << "omega1 * tau_c = " << drive_product
        << " is not small; the second-order treatment of the drive breaks down";
    warnings.push_back(msg.str());
    msg.str("");
  }
  const double dipole_product = std::abs(p.omega_d) * p.tau_c;
  if (dipole_product >= 0.1) {
    msg << "omega_d * tau_c = " << dipole_product
        << " is not small; the second-order treatment of the coupling breaks down";
    warnings.push_back(msg.str());
    msg.str("");
  }
  if (p.omega0 > 0.0) {
    const double motional = 2.0 * p.omega0 * p.tau_c;
    if (motional < 10.0) {
      msg << "2 * omega0 * tau_c = " << motional
          << " is not >> 1; dropping the counter-rotating terms is unjustified";
      warnings.push_back(msg.str());
      msg.str("");
    }
    // Stated validity condition, compared numerically as written even though
    // the sides have different dimensions.
    if (p.omega1 * p.omega1 >= 0.1 * p.omega0) {
      msg << "omega1^2 = " << p.omega1 * p.omega1 << " is not << omega0 = "
          << p.omega0 << "; the weak-drive assumption fails";
      warnings.push_back(msg.str());
      msg.str("");
    }
  }
  return warnings;
}

}  // namespace spinpair
