// lossless.hpp - closed-form directional photon numbers of a lossless
// three-layer cavity.
//
// In a lossless structure the photon numbers are piecewise constant and
// depend only on the cavity geometry and the two input fields n_{1+} (from
// the left) and n_{3-} (from the right). They are evaluated through the
// generalized reflection/transmission coefficients of the two-interface
// system; the sqrt(eps_i/eps_j) prefactors convert between the per-medium
// mode normalizations. The outputs always lie between the input photon
// numbers, so global equilibrium is preserved exactly.
//
// These closed forms double as the small-loss oracle for the numeric engine:
// adding n_i ~ 1e-6 to every layer and choosing the outer temperatures so the
// thermal occupations match the inputs reproduces the same numbers.

#pragma once

#include <cmath>
#include <complex>

#include "qfed/constants.hpp"
#include "qfed/errors.hpp"
#include "qfed/greens.hpp"

namespace qfed {

// Generalized coefficients of the two-interface cavity. Subscript 1 refers to
// the left interface, 2 to the right; primes mark right incidence.
struct CavityCoefficients {
  complexd nu2;  // 1 / (1 + r1 r2 e^{2 i k2 d2})
  complexd R1, R2, T1, T2;
  complexd R1p, R2p, T1p, T2p;
  complexd k2;   // wave number inside the cavity, 1/um
  double d2;     // cavity thickness, um
  complexd round_trip;  // e^{2 i k2 d2}
};

inline CavityCoefficients cavity_coefficients(double n1, double n2, double n3, double d2,
                                              double energy_ev) {
  if (!(n1 > 0.0 && n2 > 0.0 && n3 > 0.0))
    throw std::invalid_argument("cavity_coefficients: indices must be positive reals");
  if (!(d2 > 0.0)) throw std::invalid_argument("cavity_coefficients: requires d2 > 0");
  if (!(energy_ev > 0.0)) throw std::invalid_argument("cavity_coefficients: requires E > 0");

  const InterfaceCoefficients f1 = fresnel(n1, n2);
  const InterfaceCoefficients f2 = fresnel(n2, n3);

  CavityCoefficients c;
  c.d2 = d2;
  c.k2 = energy_ev / constants::hbar_c_ev_um * n2;
  c.round_trip = std::exp(complexd(0.0, 2.0) * c.k2 * d2);

  const complexd denom = 1.0 + f1.r * f2.r * c.round_trip;
  if (std::abs(denom) < 1e-12)
    throw PoleAtResonance("cavity_coefficients: |1 + r1 r2 e^{2 i k2 d2}| vanished");
  c.nu2 = 1.0 / denom;

  c.R1 = (f1.r + f2.r * c.round_trip) * c.nu2;
  c.R2 = f2.r;
  c.T1 = f1.t * c.nu2;
  c.T2 = f2.t;
  c.R1p = f1.r_prime;
  c.R2p = (f2.r_prime + f1.r_prime * c.round_trip) * c.nu2;
  c.T1p = f1.t_prime;
  c.T2p = f2.t_prime * c.nu2;
  return c;
}

struct CavityInputs {
  double n1_plus;  // photon number incident from the left
  double n3_minus; // photon number incident from the right
  double eps1, eps2, eps3;  // real permittivities (n_i^2)
};

struct CavityPhotonNumbers {
  double n1_minus;
  double n2_plus;
  double n2_minus;
  double n3_plus;
};

inline CavityPhotonNumbers lossless_photon_numbers(const CavityCoefficients& c,
                                                   const CavityInputs& in) {
  if (in.n1_plus < 0.0 || in.n3_minus < 0.0)
    throw std::invalid_argument("lossless_photon_numbers: inputs must be >= 0");
  if (!(in.eps1 > 0.0 && in.eps2 > 0.0 && in.eps3 > 0.0))
    throw std::invalid_argument("lossless_photon_numbers: permittivities must be > 0");

  const double denom = std::real(1.0 + 2.0 * c.R1p * c.R2 * c.nu2 * c.round_trip);

  CavityPhotonNumbers out;
  out.n1_minus = std::norm(c.R1) * in.n1_plus +
                 std::sqrt(in.eps1 / in.eps3) * std::norm(c.T1p * c.T2p) * in.n3_minus;
  out.n2_plus = (std::sqrt(in.eps2 / in.eps1) * std::norm(c.T1) * in.n1_plus +
                 std::sqrt(in.eps2 / in.eps3) * std::norm(c.T2p * c.R1p) * in.n3_minus) /
                denom;
  out.n2_minus = (std::sqrt(in.eps2 / in.eps1) * std::norm(c.T1 * c.R2) * in.n1_plus +
                  std::sqrt(in.eps2 / in.eps3) * std::norm(c.T2p) * in.n3_minus) /
                 denom;
  out.n3_plus = std::sqrt(in.eps3 / in.eps1) * std::norm(c.T1 * c.T2) * in.n1_plus +
                std::norm(c.R2p) * in.n3_minus;
  return out;
}

}  // namespace qfed
