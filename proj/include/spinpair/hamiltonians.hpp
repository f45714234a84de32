#pragma once

#include <string>
#include <vector>

#include "spinpair/spin_algebra.hpp"

namespace spinpair {

// Scalar physics inputs. All frequencies are angular (rad/s), times in
// seconds. omega_d may carry either sign; the steady state is even in it.
// omega0 = 0 means "not specified" and disables the Larmor-scale regime
// checks in validate_regime().
struct PhysicalParams {
  double omega1 = 0.0;       // locking drive amplitude
  double omega_d = 0.0;      // dipolar coupling strength
  double tau_c = 1e-6;       // bath fluctuation correlation time
  double m0 = 1.0;           // equilibrium moment feeding the initial state
  double delta_omega = 0.0;  // drive offset from resonance; must stay 0
  double omega0 = 0.0;       // Larmor frequency, optional

  // Throws std::invalid_argument for non-finite entries or tau_c < 0 and
  // InvalidM0 for m0 outside (0, 1].
  void validate() const;
};

// Dipolar pair geometry used to derive the coupling strength.
struct Geometry {
  double gamma;  // gyromagnetic ratio, rad s^-1 T^-1
  double r;      // internuclear distance, m
  double theta;  // polar angle of the internuclear vector, rad
  double phi;    // azimuthal angle, rad (the secular coupling ignores it)
};

// omega_d = (gamma^2 / r^3) * sqrt(5/16pi) * (3 cos^2 theta - 1), in the
// units where the prefactor mu0 hbar / 4pi is absorbed into gamma^2.
// Vanishes at the magic angle and is negative for theta near pi/2.
double omega_d_from_geometry(const Geometry& geo);

// Secular dipolar coupling omega_d (2 Iz Sz - Ix Sx - Iy Sy).
Operator secular_dipolar(const PhysicalParams& p);

// Rotating-frame drive omega1 Fx; only the resonant case is supported and
// delta_omega != 0 raises UnsupportedOffResonance.
Operator drive_rotating(const PhysicalParams& p);

// Generator of the dissipative dynamics on vectorized operators:
//   L(rho) = -i [H, rho] - tau_c [H, [H, rho]],  H = H_drive + H_dipolar.
// The four second-order pieces are kept separately; matrix is their sum
// plus the first-order commutator.
struct Liouvillian {
  SuperMatrix matrix;
  SuperMatrix first_order;    // -i [H, .]
  SuperMatrix drive_drive;    // -tau_c [H_drive, [H_drive, .]]
  SuperMatrix drive_dipole;   // -tau_c [H_drive, [H_dipolar, .]]
  SuperMatrix dipole_drive;   // -tau_c [H_dipolar, [H_drive, .]]
  SuperMatrix dipole_dipole;  // -tau_c [H_dipolar, [H_dipolar, .]]
  PhysicalParams params;

  Operator apply(const Operator& x) const;
};

Liouvillian build_liouvillian(const PhysicalParams& p);

// Human-readable warnings for parameter sets outside the regime where the
// second-order generator is trustworthy. ">>" / "<<" are enforced with a
// factor-10 margin; the omega1^2 << omega0 condition is compared numerically
// as stated even though the two sides carry different units.
std::vector<std::string> validate_regime(const PhysicalParams& p);

}  // namespace spinpair
