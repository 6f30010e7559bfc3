#pragma once

#include <complex>

#include "spinlab/qcore.hpp"

namespace spinlab::scatter {

enum class Coupling { Isotropic, XY };
enum class Initial { A, B };  // A: single-magnon sample; B: polarized sample

// Knobs of the two-neutron sequential-scattering protocol.  Natural units,
// lambda already carries the absorbed 3/8 magnetic prefactor.  tau is the
// free-flight time D/k0 of a forward-scattered neutron through the sample.
struct ScatterConfig {
  int n_spins = 10;            // N >= 2
  double lambda = 1.0;         // coupling strength, > 0
  double b_z = 0.0;            // applied field along z
  double tau = 0.0;            // interaction time per scattering event
  double tau_f_prime = 0.0;    // free evolution between the two events
  Complex alpha{1.0, 0.0};     // neutron polarization, |alpha|^2+|beta|^2 = 1
  Complex beta{0.0, 0.0};
  Coupling coupling = Coupling::Isotropic;
  Initial initial = Initial::A;
  double j_exchange = 0.0;     // sample-internal J; a multiple of identity here

  void validate() const;
};

// Amplitudes over the 8-dimensional reduced basis |1>..|8| i.e.
// |second neutron, first neutron, sample>, sample in {0, 1, 2 flips at k=0}.
struct BlochState {
  ComplexVector amplitudes;  // size 8
};

// Closed-form spectral quantities of the effective Hamiltonians.
struct DerivedParams {
  double phi, varphi, c, d;        // single-excitation sector
  double gamma, vartheta, f, g;    // double-excitation sector
  double lambda_phase;             // global phase rate ("Lambda")
  double x, y, w, z;               // phase rates of the individual components
};

struct Landmarks {
  double b_star;          // optimal field
  double tau_star;        // optimal interaction time at b_star
  double t_phi;           // oscillation period of the concurrence
  double b_minus, b_plus; // double-peak field interval
  double c_outside;       // peak concurrence outside [b-, b+]
  double c_inside;        // peak concurrence inside, 4/(3 sqrt 3)
  double b_threshold_xy;  // XY threshold field sqrt(2) lambda / sqrt(N)
  double tau_b;           // optimal interaction time at the configured field
};

struct SiQuantities {
  double lambda_si;   // J, from the full constant expression
  double b_star_t;    // tesla, order-of-magnitude form 1e-32 (a0/m)^-3
  double tau_star_s;  // seconds, order-of-magnitude form 1e20 (a0/m)^3 sqrt(N)
};

struct ProtocolResult {
  BlochState final_state;   // global phase rotated away
  DensityMatrix rho_n;      // 4x4 neutron reduction, basis |n2 n1>
};

// Effective 8x8 Hamiltonian of scattering event `neutron` (1 or 2) in the
// Bloch basis.  The XY variant keeps only the field on the diagonal.
ComplexMatrix effective_hamiltonian(const ScatterConfig& cfg, int neutron);

// Free Hamiltonian between events: field term only (the sample-internal
// exchange is a multiple of the identity on this basis).
ComplexMatrix free_hamiltonian(const ScatterConfig& cfg);

DerivedParams derived_params(const ScatterConfig& cfg);

BlochState initial_state(const ScatterConfig& cfg);

// Four-phase evolution U(H2,tau) U(H0,tau_f') U(H1,tau) applied to the
// initial state, plus the neutron-pair reduction.
ProtocolResult run_protocol(const ScatterConfig& cfg);

// Closed-form two-neutron concurrence (initial A only).
double concurrence_closed_form(const ScatterConfig& cfg);

// Landmark fields and times (initial A only).
Landmarks landmarks(const ScatterConfig& cfg);

// First-neutron/sample concurrence at zero field (initial A), with the
// sample's reachable space treated as the qubit span{|0>, |s1_0>}.
double c1_neutron_sample(const ScatterConfig& cfg);

// Two-atom cavity-exchange concurrence for equal interaction times.
double haroche_concurrence(double lambda_rate, double tau);

// SI conversions for lattice constant a0 (metres) and N spins.
SiQuantities si_quantities(double a0, double n_spins);

// Protocol in the reduced canonical basis (dimension N^2/2 + 5N/2 + 4):
// independent oracle for the Bloch-basis path.  N <= 14.
DensityMatrix full_basis_oracle(const ScatterConfig& cfg);

}  // namespace spinlab::scatter
