#include "spinlab/entmeas.hpp"

#include <cmath>

namespace spinlab::entmeas {

using qcore::kron;
using qcore::pauli_y;

namespace {

void require_two_qubits(const DensityMatrix& rho, const char* where) {
  std::string why;
  if (rho.dim() != 4) throw InvalidDensityMatrix(std::string(where) + ": expected a 4x4 state");
  if (!qcore::is_valid_density(rho, &why))
    throw InvalidDensityMatrix(std::string(where) + ": " + why);
}

ComplexVector qubit_state(char axis, int sign) {
  ComplexVector v(2);
  const Complex i{0.0, 1.0};
  switch (axis) {
    case 'z': v << (sign > 0 ? 1 : 0), (sign > 0 ? 0 : 1); break;
    case 'x': v << 1.0 / std::sqrt(2.0), (sign > 0 ? 1.0 : -1.0) / std::sqrt(2.0); break;
    default:  v << 1.0 / std::sqrt(2.0), (sign > 0 ? i : -i) / std::sqrt(2.0); break;
  }
  return v;
}

}  // namespace

double concurrence(const DensityMatrix& rho) {
  require_two_qubits(rho, "concurrence");
  ComplexMatrix yy = kron(pauli_y(), pauli_y());
  ComplexMatrix rho_tilde = yy * rho.mat.conjugate() * yy;
  ComplexMatrix s = qcore::matrix_sqrt_psd(rho.mat);
  ComplexMatrix r = qcore::matrix_sqrt_psd(s * rho_tilde * s);
  EigenSystem es = qcore::hermitian_eigendecomposition(r);
  const auto& w = es.eigenvalues;  // ascending
  double c = w[3] - w[2] - w[1] - w[0];
  return c > 0.0 ? c : 0.0;
}

double eof_from_concurrence(double c) {
  if (c < 0.0 || c > 1.0) throw OutOfRange("eof_from_concurrence: concurrence outside [0,1]");
  auto h = [](double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
  };
  return h((1.0 - std::sqrt(1.0 - c * c)) / 2.0);
}

double log_negativity(const DensityMatrix& rho, int subsystem) {
  std::string why;
  if (!qcore::is_valid_density(rho, &why))
    throw InvalidDensityMatrix(std::string("log_negativity: ") + why);
  ComplexMatrix pt = qcore::partial_transpose(rho, subsystem);
  EigenSystem es = qcore::hermitian_eigendecomposition(pt);
  return std::log2(es.eigenvalues.cwiseAbs().sum());
}

double von_neumann_entropy(const DensityMatrix& rho) {
  std::string why;
  if (!qcore::is_valid_density(rho, &why))
    throw InvalidDensityMatrix(std::string("von_neumann_entropy: ") + why);
  EigenSystem es = qcore::hermitian_eigendecomposition(rho.mat);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
    double p = es.eigenvalues[k];
    if (p > 1e-15) s -= p * std::log2(p);
  }
  return s;
}

WitnessOperator witness_from_state(const DensityMatrix& rho_n) {
  require_two_qubits(rho_n, "witness_from_state");
  ComplexMatrix pt = qcore::partial_transpose(rho_n, 0);
  EigenSystem es = qcore::hermitian_eigendecomposition(pt);
  if (es.eigenvalues[0] >= -1e-10)
    throw NoNegativeEigenvalue("witness_from_state: partial transpose is positive (PPT state)");
  // Degenerate minima break ties deterministically: pick the eigenvector whose
  // first nonzero amplitude is lexicographically largest after being made
  // real positive.
  ComplexVector e_best = qcore::normalize_global_phase(es.eigenvectors.col(0));
  for (int k = 1; k < es.eigenvalues.size(); ++k) {
    if (es.eigenvalues[k] > es.eigenvalues[0] + 1e-14) break;
    ComplexVector e_k = qcore::normalize_global_phase(es.eigenvectors.col(k));
    for (Eigen::Index j = 0; j < 4; ++j) {
      double d = e_k[j].real() - e_best[j].real();
      if (std::abs(d) < 1e-14) continue;
      if (d > 0) e_best = e_k;
      break;
    }
  }
  WitnessOperator w;
  w.matrix = e_best * e_best.adjoint();
  w.source_eigenvalue = es.eigenvalues[0];
  return w;
}

double witness_expectation(const WitnessOperator& w, const DensityMatrix& rho, bool transpose_first) {
  if (rho.dim() != 4 || w.matrix.rows() != 4)
    throw DimensionMismatch("witness_expectation: dimensions differ");
  if (transpose_first) {
    DensityMatrix wd{w.matrix, {2, 2}};
    return (qcore::partial_transpose(wd, 0) * rho.mat).trace().real();
  }
  return (w.matrix * rho.mat).trace().real();
}

ComplexMatrix WitnessDecomposition::reconstruct() const {
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  for (const auto& t : terms) sum += t.coefficient * t.projector;
  return sum;
}

WitnessDecomposition witness_decomposition(double a, double b) {
  if (std::abs(a * a + b * b - 1.0) > tol::norm)
    throw NotNormalized("witness_decomposition: a^2 + b^2 must be one");
  WitnessDecomposition d;
  d.settings_count = 3;
  auto add = [&](double coeff, char axis, int s1, int s2) {
    ComplexVector u = qubit_state(axis, s1), v = qubit_state(axis, s2);
    ComplexVector uv(4);
    uv << u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1];
    d.terms.push_back({coeff, std::string(1, axis), uv * uv.adjoint()});
  };
  add(a * a, 'z', +1, +1);
  add(b * b, 'z', -1, -1);
  add(a * b, 'x', +1, +1);
  add(a * b, 'x', -1, -1);
  add(-a * b, 'y', +1, -1);
  add(-a * b, 'y', -1, +1);
  return d;
}

}  // namespace spinlab::entmeas
