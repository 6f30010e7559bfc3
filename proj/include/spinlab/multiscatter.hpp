#pragma once

#include <map>
#include <utility>

#include "spinlab/scatter.hpp"

namespace spinlab::multiscatter {

using scatter::ScatterConfig;

// One-event scattering amplitudes in the single-excitation sector.
// P: sample flip stays put; Q: flip hops to the scattered neutron;
// R: closed-form second-neutron coefficient as printed (equals Q P at the
// optimal field); s: phase rate picked up by spectator flips per event.
struct PQRCoefficients {
  Complex p, q, r;
  double s;
};

// State after k scattering events, initial A: amplitudes over the
// (k+1)-site single-flip basis, site 0 = sample, site i = neutron i.
struct MultiState {
  int k;
  ComplexVector amplitudes;  // size k+1
};

struct PairConcurrenceTable {
  std::map<std::pair<int, int>, double> entries;
  ScatterConfig config;
};

struct ZetaLandmarks {
  int zeta;
  double zeta_b;
  bool double_peaked;   // regime flag: large-zeta double-peak regime
  double c_peak;
  double tau_peak;
  double b_minus, b_plus;
};

PQRCoefficients pqr(const ScatterConfig& cfg);

// Exact sequential evolution of the single-flip amplitudes (initial A).
MultiState state_after_k(const ScatterConfig& cfg, int k);

// Concurrence of neutrons (m, n), 1 <= m < n <= k: closed form
// C_{m,n} = C_{1,m+n-1} = 2 |P^{m+n-2}| |Q|^2.
double pair_concurrence(const ScatterConfig& cfg, int m, int n);

// Same, but from a Wootters evaluation of the reduced pair state - the
// brute-force cross-check of the closed form.
double pair_concurrence_brute(const ScatterConfig& cfg, int k, int m, int n);

// Reduced two-neutron state of the pair (m, n) from a MultiState, basis
// |n_later n_earlier> to match the two-neutron module.
DensityMatrix reduce_pair(const MultiState& st, int m, int n);

// Closed-form generalisation of the two-neutron concurrence to any pair.
double pair_concurrence_closed(int n_spins, double lambda, double b_z, double tau, int m, int n);

// Peak structure of C_{m,n} as a function of zeta = m + n.
ZetaLandmarks zeta_landmarks(int n_spins, double lambda, double b_z, int m, int n);

// Numerical many-neutron evolution for the polarized sample (initial B),
// sample restricted to its reachable symmetric sector.  k <= 12.
double polarized_oracle(const ScatterConfig& cfg, int k, int m, int n);
DensityMatrix polarized_pair_state(const ScatterConfig& cfg, int k, int m, int n);

// Mean pair concurrence over all unordered pairs within [1, t].
double average_pair_concurrence(const ScatterConfig& cfg, int t);

PairConcurrenceTable pair_table(const ScatterConfig& cfg, int k);

}  // namespace spinlab::multiscatter
