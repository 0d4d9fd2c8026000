// constants.hpp - physical constants and unit conventions.
//
// Unit system used throughout the library:
//   photon energy E = hbar*omega in eV, lengths in um, temperatures in K.
// All conversions go through the constants below (CODATA 2018).

#pragma once

namespace qfed::constants {

inline constexpr double hbar_c_ev_um = 0.1973269804;        // hbar*c [eV um] (= 197.3269804 eV nm)
inline constexpr double k_boltzmann_ev_per_k = 8.617333262e-5;  // k_B [eV/K]
inline constexpr double speed_of_light_m_per_s = 2.99792458e8;
inline constexpr double speed_of_light_um_per_s = 2.99792458e14;

// Quantization area S in the transverse plane. Fixed to 1: it cancels in every
// photon number and effective temperature, and LDOS values are reported in
// units of 2/(pi c S) where it cancels as well.
inline constexpr double quantization_area = 1.0;

inline constexpr double pi = 3.14159265358979323846;

}  // namespace qfed::constants
