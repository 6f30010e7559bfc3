#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "spinlab/constants.hpp"
#include "spinlab/errors.hpp"

namespace spinlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// State vector with optional basis labels.  All evolution routines keep the
// norm within tol::norm.
struct StateVector {
  ComplexVector amplitudes;
  std::vector<std::string> basis_labels;  // may be empty

  Eigen::Index dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
};

// Density matrix carrying its tensor-factor structure.
struct DensityMatrix {
  ComplexMatrix mat;
  std::vector<Eigen::Index> subsystem_dims;

  Eigen::Index dim() const { return mat.rows(); }
};

struct EigenSystem {
  RealVector eigenvalues;    // ascending
  ComplexMatrix eigenvectors;  // columns, orthonormal
};

namespace qcore {

// Pauli matrices and the 2x2 identity.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix identity2();

bool is_hermitian(const ComplexMatrix& m, double tol = tol::hermiticity);

// Tensor (Kronecker) product.  Dimensions multiply.
template <typename DerivedA, typename DerivedB>
ComplexMatrix kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = Complex(a(i, j)) * b;
  return out;
}

// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
// Throws NonHermitianInput if the symmetry check fails.
EigenSystem hermitian_eigendecomposition(const ComplexMatrix& h);

// exp(-i h t) |psi> computed through the spectral decomposition of h.
StateVector evolve_state(const ComplexMatrix& h, double t, const StateVector& psi);
ComplexVector evolve(const EigenSystem& es, double t, const ComplexVector& psi);

// exp(-i h t) as a dense matrix.
ComplexMatrix evolution_operator(const ComplexMatrix& h, double t);

// Pure-state density matrix |psi><psi| with the given factor dimensions.
DensityMatrix density_of(const StateVector& psi, std::vector<Eigen::Index> subsystem_dims);

// Reduced density matrix over the kept subsystems (indices into
// subsystem_dims, ascending order preserved).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Transpose the indices of one factor of a bipartite state.  The result is
// Hermitian whenever the input is.
ComplexMatrix partial_transpose(const DensityMatrix& rho, int subsystem);

// Validity checks for density matrices (Hermitian, unit trace, PSD).
bool is_valid_density(const DensityMatrix& rho, std::string* why = nullptr);

// Hermitian PSD square root via spectral decomposition.  Eigenvalues below
// max(rel * lambda_max, abs_floor) are clamped to zero; negative round-off is
// never propagated into the root.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m, double rel = 1e-14, double abs_floor = 1e-16);

// Rotate a global phase so the first amplitude above `cut` is real positive.
ComplexVector normalize_global_phase(const ComplexVector& v, double cut = 1e-12);

}  // namespace qcore
}  // namespace spinlab
