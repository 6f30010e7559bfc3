#pragma once

#include <vector>

#include "spinlab/qcore.hpp"

namespace spinlab::barrier {

// Spin-1/2 Gaussian wavepacket crossing a uniform-field region.  Natural
// units hbar = m = 1, so E_k = k^2/2 and the free group velocity is k.
// The field region spans [0, l]; spin-up sees +b_z, spin-down -b_z.
struct BarrierConfig {
  double big_l = 40.0;   // periodic box, modes k_m = m 2 pi / big_l
  double l = 10.0;       // barrier extent
  double b_z = 0.05;
  double k0 = 10.0 * M_PI / 40.0;
  double x0 = -8.0;      // initial packet centre
  double w = 2.0;        // k-space Gaussian weight exp(-(k-k0)^2 w^2)
  int n_modes = 257;     // odd, centred on round(k0 big_l / 2 pi)

  void validate() const;
};

enum class Spin { Up, Down };

// Scattering coefficients of a single k-mode.  q may be imaginary below the
// barrier; the principal branch is taken and flux is conserved throughout.
struct ModeCoefficients {
  double k;
  Complex q;
  Complex r, t, r_prime, t_prime;  // region-1 reflection, region-2 amps, region-3 transmission
};

struct Spinor {
  Complex up, down;
  double density() const { return std::norm(up) + std::norm(down); }
};

struct ArrivalTrace {
  std::vector<double> times;
  std::vector<double> density;  // |Psi|^2 at x_out, spin-summed
  double t_peak;
};

struct SpinExpectation {
  double sx, sy, sz;
};

struct ClockComparison {
  double t_b;                 // barrier dwell time l / mean(q_up, q_dn)
  double expected_phi;        // 2 b_z t_b precession about z
  double measured_phi_min, measured_phi_max;
  bool consistent;
};

ModeCoefficients mode_coefficients(double k, double b_z, double l, Spin spin);

// Spinor amplitude of the packet at (x, t).
Spinor wavepacket(const BarrierConfig& cfg, double x, double t);

// |Psi|^2(t) sampled on a uniform grid at x_out, with the peak refined.
ArrivalTrace arrival_distribution(const BarrierConfig& cfg, double x_out,
                                  double t_min = 0.0, double t_max = 0.0, int samples = 600);

// Pauli expectation values of the local spinor density matrix at (x_out, t).
SpinExpectation spin_expectations(const BarrierConfig& cfg, double x_out, double t);

// Space clock vs spin clock over the packet's half-maximum arrival window.
ClockComparison clock_comparison(const BarrierConfig& cfg, double x_out);

}  // namespace spinlab::barrier
