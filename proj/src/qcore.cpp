#include "spinlab/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace spinlab::qcore {

namespace {
const Complex I{0.0, 1.0};
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, -I, I, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix identity2() { return ComplexMatrix::Identity(2, 2); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

EigenSystem hermitian_eigendecomposition(const ComplexMatrix& h) {
  if (!is_hermitian(h))
    throw NonHermitianInput("hermitian_eigendecomposition: input fails the Hermiticity check");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error("hermitian_eigendecomposition: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexVector evolve(const EigenSystem& es, double t, const ComplexVector& psi) {
  ComplexVector modal = es.eigenvectors.adjoint() * psi;
  for (Eigen::Index k = 0; k < modal.size(); ++k)
    modal[k] *= std::exp(-I * es.eigenvalues[k] * t);
  return es.eigenvectors * modal;
}

StateVector evolve_state(const ComplexMatrix& h, double t, const StateVector& psi) {
  if (h.rows() != psi.dim())
    throw DimensionMismatch("evolve_state: operator and state dimensions differ");
  EigenSystem es = hermitian_eigendecomposition(h);
  return {evolve(es, t, psi.amplitudes), psi.basis_labels};
}

ComplexMatrix evolution_operator(const ComplexMatrix& h, double t) {
  EigenSystem es = hermitian_eigendecomposition(h);
  ComplexVector phases(es.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases[k] = std::exp(-I * es.eigenvalues[k] * t);
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

DensityMatrix density_of(const StateVector& psi, std::vector<Eigen::Index> subsystem_dims) {
  Eigen::Index prod = 1;
  for (auto d : subsystem_dims) prod *= d;
  if (prod != psi.dim())
    throw BadSubsystemSpec("density_of: factor dimensions do not multiply to the state dimension");
  DensityMatrix rho;
  rho.mat = psi.amplitudes * psi.amplitudes.adjoint();
  rho.subsystem_dims = std::move(subsystem_dims);
  return rho;
}

namespace {

// Decompose a flat index into per-factor digits (leftmost factor most
// significant, matching the |later, earlier, ...> label order).
void unflatten(Eigen::Index idx, const std::vector<Eigen::Index>& dims, std::vector<Eigen::Index>& out) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = idx % dims[k];
    idx /= dims[k];
  }
}

Eigen::Index flatten(const std::vector<Eigen::Index>& digits, const std::vector<Eigen::Index>& dims) {
  Eigen::Index idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const auto& dims = rho.subsystem_dims;
  Eigen::Index prod = 1;
  for (auto d : dims) prod *= d;
  if (prod != rho.dim())
    throw BadSubsystemSpec("partial_trace: subsystem_dims inconsistent with matrix dimension");
  for (int k : keep)
    if (k < 0 || static_cast<std::size_t>(k) >= dims.size())
      throw BadSubsystemSpec("partial_trace: keep index out of range");
  for (std::size_t i = 1; i < keep.size(); ++i)
    if (keep[i] <= keep[i - 1]) throw BadSubsystemSpec("partial_trace: keep indices must ascend");

  std::vector<Eigen::Index> keep_dims;
  for (int k : keep) keep_dims.push_back(dims[k]);
  Eigen::Index out_dim = 1;
  for (auto d : keep_dims) out_dim *= d;

  DensityMatrix out;
  out.mat = ComplexMatrix::Zero(out_dim, out_dim);
  out.subsystem_dims = keep_dims;

  std::vector<Eigen::Index> di(dims.size()), dj(dims.size());
  std::vector<Eigen::Index> ki(keep.size()), kj(keep.size());
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    unflatten(i, dims, di);
    for (Eigen::Index j = 0; j < rho.dim(); ++j) {
      unflatten(j, dims, dj);
      bool diagonal_elsewhere = true;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (std::find(keep.begin(), keep.end(), static_cast<int>(k)) != keep.end()) continue;
        if (di[k] != dj[k]) {
          diagonal_elsewhere = false;
          break;
        }
      }
      if (!diagonal_elsewhere) continue;
      for (std::size_t k = 0; k < keep.size(); ++k) {
        ki[k] = di[keep[k]];
        kj[k] = dj[keep[k]];
      }
      out.mat(flatten(ki, keep_dims), flatten(kj, keep_dims)) += rho.mat(i, j);
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, int subsystem) {
  if (rho.subsystem_dims.size() != 2)
    throw BadSubsystemSpec("partial_transpose: a bipartite factorisation is required");
  if (subsystem != 0 && subsystem != 1)
    throw BadSubsystemSpec("partial_transpose: subsystem must be 0 or 1");
  const Eigen::Index da = rho.subsystem_dims[0], db = rho.subsystem_dims[1];
  if (da * db != rho.dim())
    throw BadSubsystemSpec("partial_transpose: dims inconsistent with matrix");
  ComplexMatrix out(rho.dim(), rho.dim());
  for (Eigen::Index ia = 0; ia < da; ++ia)
    for (Eigen::Index ib = 0; ib < db; ++ib)
      for (Eigen::Index ja = 0; ja < da; ++ja)
        for (Eigen::Index jb = 0; jb < db; ++jb) {
          Eigen::Index r = ia * db + ib, c = ja * db + jb;
          Eigen::Index rt = subsystem == 0 ? ja * db + ib : ia * db + jb;
          Eigen::Index ct = subsystem == 0 ? ia * db + jb : ja * db + ib;
          out(rt, ct) = rho.mat(r, c);
        }
  return out;
}

bool is_valid_density(const DensityMatrix& rho, std::string* why) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (rho.mat.rows() != rho.mat.cols()) return fail("not square");
  if (!is_hermitian(rho.mat)) return fail("not Hermitian");
  if (std::abs(rho.mat.trace().real() - 1.0) > tol::norm || std::abs(rho.mat.trace().imag()) > tol::norm)
    return fail("trace differs from one");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.mat, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < tol::psd_floor) return fail("negative eigenvalue");
  return true;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m, double rel, double abs_floor) {
  EigenSystem es = hermitian_eigendecomposition(m);
  const double wmax = std::max(es.eigenvalues.maxCoeff(), 0.0);
  const double cut = std::max(rel * wmax, abs_floor);
  RealVector roots(es.eigenvalues.size());
  for (Eigen::Index k = 0; k < roots.size(); ++k)
    roots[k] = es.eigenvalues[k] > cut ? std::sqrt(es.eigenvalues[k]) : 0.0;
  return es.eigenvectors * roots.asDiagonal() * es.eigenvectors.adjoint();
}

ComplexVector normalize_global_phase(const ComplexVector& v, double cut) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) > cut) {
      Complex phase = v[k] / std::abs(v[k]);
      return v / phase;
    }
  }
  return v;
}

}  // namespace spinlab::qcore
