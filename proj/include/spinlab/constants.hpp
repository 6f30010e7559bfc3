#pragma once

namespace spinlab {

inline constexpr const char* version = "0.1.0";

// Numerical tolerances shared by the library and its test suites.
namespace tol {
inline constexpr double hermiticity = 1e-12;   // max|M - M^dag|
inline constexpr double norm = 1e-10;          // state normalisation / trace
inline constexpr double spectral = 1e-10;      // eigen residual, relative to ||H||
inline constexpr double psd_floor = -1e-10;    // smallest admissible density eigenvalue
}  // namespace tol

// SI constants used only for unit conversions (CODATA values).
namespace si {
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double mu_0 = 1.25663706212e-6;     // T m / A
inline constexpr double mu_B = 9.2740100783e-24;     // J / T
inline constexpr double mu_N = 5.0507837461e-27;     // J / T
inline constexpr double g_e = 2.00231930436;
inline constexpr double g_n = 3.82608545;            // magnitude of the neutron g-factor
}  // namespace si

}  // namespace spinlab
