#pragma once

#include <string>
#include <vector>

#include "spinlab/qcore.hpp"

namespace spinlab::entmeas {

// Entanglement witness built from the most negative eigenvector of a partial
// transpose.  `matrix` is the rank-1 projector |e-><e-|; the measurable,
// three-setting form is its partial transpose on the first qubit.
struct WitnessOperator {
  ComplexMatrix matrix;       // 4x4 projector
  double source_eigenvalue;   // the negative eigenvalue it was built from
};

struct WitnessTerm {
  double coefficient;
  std::string setting;        // "x", "y" or "z"
  ComplexMatrix projector;    // 4x4
};

struct WitnessDecomposition {
  std::vector<WitnessTerm> terms;
  int settings_count;

  ComplexMatrix reconstruct() const;
};

// Wootters concurrence of a two-qubit state, from the spectrum of
// R = sqrt(sqrt(rho) rho~ sqrt(rho)), rho~ = (sy (x) sy) rho* (sy (x) sy).
double concurrence(const DensityMatrix& rho);

// Entanglement of formation in ebits as a function of the concurrence.
double eof_from_concurrence(double c);

// log2 of the trace norm of the partial transpose over the given subsystem.
double log_negativity(const DensityMatrix& rho, int subsystem = 0);

// -Tr[rho log2 rho], evaluated on the spectrum with 0 log 0 == 0.
double von_neumann_entropy(const DensityMatrix& rho);

// Witness from the most negative eigenvector of rho^{T_A}.  Throws
// NoNegativeEigenvalue when the state is PPT.
WitnessOperator witness_from_state(const DensityMatrix& rho_n);

// Tr[W^{T_A} rho] when transpose_first, else Tr[W rho].
double witness_expectation(const WitnessOperator& w, const DensityMatrix& rho, bool transpose_first);

// Three-setting decomposition of the measurable witness for the
// a|00> + b|11> eigenvector family.  The summed terms equal the partial
// transpose (first qubit) of |e-><e-|.
WitnessDecomposition witness_decomposition(double a, double b);

}  // namespace spinlab::entmeas
