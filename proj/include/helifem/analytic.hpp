#pragma once

#include <complex>
#include <vector>

#include "helifem/section.hpp"

// Closed-form references used to cross-check the numerical pipeline: the
// classical round-wire skin-effect solution (complex Bessel series) and the
// low-frequency loss bound for twisted strands (uniform current density over
// an elongated path).

namespace helifem {

using cplx = std::complex<double>;

// Series evaluation of the Bessel functions of the first kind, valid for
// moderate |z| (converges comfortably for |z| < 20 in double precision).
cplx bessel_j0(cplx z);
cplx bessel_j1(cplx z);

double skin_depth(double omega, double resistivity, double permeability);

// Internal impedance per unit length of a solid round wire of radius a.
cplx round_wire_impedance(double omega, double a, double resistivity, double permeability);

// R_AC / R_DC for a solid round wire: Re[(ka/2) J0(ka)/J1(ka)], k^2 = -j w mu / rho.
double round_wire_ac_dc_ratio(double omega, double a, double resistivity, double permeability);

// Current density magnitude profile |J(r)| for total current |I| = 1.
double round_wire_current_density(double omega, double a, double resistivity,
                                  double permeability, double r);

// Low-frequency limit of the total loss per unit axial length: each strand at
// lay radius r carries its current uniformly along a path elongated by
// sqrt(1 + (twist * r)^2).
double dc_loss_per_meter(const CablePlan& plan, const std::vector<cplx>& currents);

}  // namespace helifem
