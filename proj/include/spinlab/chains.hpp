#pragma once

#include <vector>

#include "spinlab/qcore.hpp"

namespace spinlab::chains {

enum class Geometry { Open, Ring };
enum class CouplingModel { Heisenberg, Dipolar };

// Single-excitation chain/ring description.  Positions are in units of the
// nearest-neighbour spacing a; the uniform default is j - 1.  Couplings:
// Heisenberg J (nearest neighbour) or dipolar epsilon / r^3 (all pairs,
// minimum image on a ring).
struct ChainSpec {
  Geometry geometry = Geometry::Open;
  CouplingModel coupling = CouplingModel::Dipolar;
  int n = 2;
  double strength = 1.0;             // J or epsilon
  std::vector<double> positions;     // empty => uniform

  std::vector<double> resolved_positions() const;
  void validate() const;
};

struct SpectralData {
  RealVector energies;     // ascending for numeric paths; definition order for closed forms
  Eigen::MatrixXd modes;   // site x mode amplitudes (real)
};

struct FidelityTrace {
  std::vector<double> times;
  std::vector<double> fidelity;  // averaged fidelity in [1/2, 1]
  std::vector<double> f_abs;     // |f(t)|
  double f_max;
  double t_at_max;
};

struct BoundStateAnalysis {
  double delta_lambda;  // splitting of the two lowest levels
  double period;        // 2 pi / delta_lambda
  double t0;            // pi / delta_lambda, first fidelity peak
  double t0_star;       // t0 / L^3 with L the position span
};

struct TwoLevelModel {
  std::vector<double> a_coeffs;  // ground state of the i x i submatrix
  double q;                      // (sum a_n)^2
  double r;                      // 3 sum a_n a_m (m + n - 2)
  double predicted_splitting(double chain_length) const;  // 2 (Q/L^3 + R/L^4)
  double predicted_t0_star(double chain_length) const;
};

// Averaged fidelity from a propagator magnitude.
inline double averaged_fidelity(double f_abs) { return f_abs / 3.0 + f_abs * f_abs / 6.0 + 0.5; }

// Single-excitation Hamiltonian; diagonals measured from the ground state.
ComplexMatrix build_hamiltonian(const ChainSpec& spec);

// Numeric spectrum of build_hamiltonian.
SpectralData numeric_spectra(const ChainSpec& spec);

// Analytic energies/modes for uniform spacings.  The dipolar-ring energies
// follow the closed-form sum verbatim, which for even N weighs the antipodal
// bond twice; numeric_spectra counts it once.  Throws NoClosedForm for the
// open dipolar chain.
SpectralData closed_spectra(const ChainSpec& spec);

// f(t) = sum_m <r|m><m|s> exp(-i E_m t), 1-based sites.
Complex propagator(const ChainSpec& spec, int s, int r, double t);

// Ring propagator from the circulant closed form, with energies supplied so
// both the verbatim closed-form set and the numeric set can be compared.
Complex ring_propagator_closed(const ChainSpec& spec, int s, int r, double t,
                               const RealVector& energies);

// Closed-form ring ground-state energies (dipolar).
double ring_ground_state_energy(int n);

// Averaged fidelity over a time grid; when encoded_k > 1 the sender state is
// the renormalised first-k amplitudes of the lowest bound state and the
// receiver state its mirror image.
FidelityTrace fidelity_trace(const ChainSpec& spec, int s, int r,
                             const std::vector<double>& t_grid, int encoded_k = 1);

// Dense scan with golden-section refinement; step <= T_min / 50 where
// T_min = 2 pi / max|E_i - E_j|.
std::pair<double, double> max_fidelity(const ChainSpec& spec, int s, int r, double t_cutoff);

// Time of the dominant end-to-end fidelity peak within the first bound-state
// beat (scan over [0, 1.25 pi / delta_lambda], then refinement).
double first_peak_time(const ChainSpec& spec);

BoundStateAnalysis bound_state_analysis(const ChainSpec& spec);

TwoLevelModel two_level_model(int i, int n_sub);

// i leading unit gaps, middle gaps of size delta, f trailing unit gaps.
std::vector<double> nonuniform_positions(int n, int i, int f, double delta);

// Fraction of seeded position-disorder draws whose end-to-end fidelity at the
// unperturbed t0 falls below `threshold` (4 spins over length l, each spin
// displaced uniformly within [-p l / 3, p l / 3]).
double robustness_mc(double l, double p, int iterations, double threshold, std::uint64_t seed);

}  // namespace spinlab::chains
