#include "spinlab/scatter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace spinlab::scatter {

namespace {

const Complex I{0.0, 1.0};

// Bloch basis states as (n2, n1, sample flips); leftmost label most
// significant, i.e. |n2 n1 s>.
constexpr std::array<std::array<int, 3>, 8> kBasis{{
    {0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 1, 0}, {0, 1, 1}, {1, 0, 0}, {1, 0, 1}, {1, 1, 0}}};

// S- on the symmetric sample sector: f -> f+1 with amplitude sqrt((N-f)(f+1)).
double lower_amp(int n, int f) { return std::sqrt(double(n - f) * double(f + 1)); }

}  // namespace

void ScatterConfig::validate() const {
  if (n_spins < 2) throw OutOfRange("ScatterConfig: N must be at least 2");
  if (lambda <= 0.0) throw OutOfRange("ScatterConfig: lambda must be positive");
  if (b_z < 0.0) throw OutOfRange("ScatterConfig: b_z must be non-negative");
  if (tau < 0.0 || tau_f_prime < 0.0) throw OutOfRange("ScatterConfig: times must be non-negative");
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > tol::norm)
    throw NotNormalized("ScatterConfig: |alpha|^2 + |beta|^2 must be one");
}

ComplexMatrix effective_hamiltonian(const ScatterConfig& cfg, int neutron) {
  cfg.validate();
  if (neutron != 1 && neutron != 2) throw OutOfRange("effective_hamiltonian: neutron must be 1 or 2");
  const int n = cfg.n_spins;
  const double lam = cfg.lambda, b = cfg.b_z;
  ComplexMatrix h = ComplexMatrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    const int n2 = kBasis[i][0], n1 = kBasis[i][1], fs = kBasis[i][2];
    const int nm = neutron == 1 ? n1 : n2;
    h(i, i) += b * (n - 2 * fs);
    if (cfg.coupling == Coupling::Isotropic)
      h(i, i) += (lam / n) * (1 - 2 * nm) * (n - 2 * fs);
    // transverse part 2 (lam/N) (s+_m S- + s-_m S+): spin flip hops between
    // the interacting neutron and the sample.
    if (nm == 1 && fs < 2) {
      std::array<int, 3> t = neutron == 1 ? std::array{n2, 0, fs + 1} : std::array{0, n1, fs + 1};
      auto it = std::find(kBasis.begin(), kBasis.end(), t);
      if (it != kBasis.end()) {
        int j = int(it - kBasis.begin());
        double amp = 2.0 * (lam / n) * lower_amp(n, fs);
        h(j, i) += amp;
        h(i, j) += amp;
      }
    }
  }
  return h;
}

ComplexMatrix free_hamiltonian(const ScatterConfig& cfg) {
  cfg.validate();
  ComplexMatrix h = ComplexMatrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i)
    h(i, i) = cfg.b_z * (cfg.n_spins - 2 * kBasis[i][2]) - cfg.j_exchange * cfg.n_spins;
  return h;
}

DerivedParams derived_params(const ScatterConfig& cfg) {
  cfg.validate();
  const double n = cfg.n_spins, lam = cfg.lambda, b = cfg.b_z;
  DerivedParams p{};
  if (cfg.coupling == Coupling::Isotropic) {
    p.phi = std::sqrt(b * b - 2.0 * b * (1.0 - 1.0 / n) * lam + (1.0 + 1.0 / n) * (1.0 + 1.0 / n) * lam * lam);
    p.varphi = lam * (1.0 / n - 1.0) + b + p.phi;
    const double den1 = std::sqrt(4.0 * lam * lam + n * p.varphi * p.varphi);
    p.c = -std::sqrt(n) * p.varphi / den1;
    p.d = 2.0 * lam / den1;
    p.gamma = std::sqrt(b * b - 2.0 * b * (1.0 - 3.0 / n) * lam + (1.0 + 1.0 / n) * (1.0 + 1.0 / n) * lam * lam);
    p.vartheta = lam * (3.0 / n - 1.0) + b + p.gamma;
    const double den2 = std::sqrt(8.0 * lam * lam * (n - 1.0) + n * n * p.vartheta * p.vartheta);
    p.f = -p.vartheta * n / den2;
    p.g = 2.0 * lam * std::sqrt(2.0 * (n - 1.0)) / den2;
    p.lambda_phase = cfg.initial == Initial::A ? (-lam / n + b * (n - 1.0) - p.phi) : (lam + b * n);
    p.x = b + lam * (1.0 + 1.0 / n) + p.phi;
    p.y = b + lam * (1.0 + 1.0 / n) - p.phi;
    p.w = 3.0 * b + lam * (1.0 + 1.0 / n) - p.gamma;
    p.z = 3.0 * b + lam * (1.0 + 1.0 / n) + p.gamma;
  } else {
    p.phi = std::sqrt(b * b + 4.0 * lam * lam / n);
    p.varphi = b + p.phi;  // limit of the isotropic form with the diagonal removed
    p.c = std::sqrt(0.5 + b / (2.0 * p.phi));
    p.d = -std::sqrt(0.5 - b / (2.0 * p.phi));
    p.gamma = std::sqrt(b * b + 8.0 * lam * lam * (n - 1.0) / (n * n));
    p.vartheta = b + p.gamma;
    p.f = std::sqrt(0.5 - b / (2.0 * p.gamma));
    p.g = std::sqrt(0.5 + b / (2.0 * p.gamma));
    p.lambda_phase = b * (n - 1.0) - p.phi;
    p.y = b + p.phi;
    p.x = b - p.phi;
    p.w = -2.0 * b + p.gamma + p.phi;
    p.z = -2.0 * b - p.gamma + p.phi;
  }
  return p;
}

BlochState initial_state(const ScatterConfig& cfg) {
  cfg.validate();
  ComplexVector v = ComplexVector::Zero(8);
  if (cfg.initial == Initial::A) {
    v[1] = 1.0;  // |2>
  } else {
    v[0] = cfg.alpha * cfg.alpha;
    v[3] = cfg.alpha * cfg.beta;
    v[5] = cfg.alpha * cfg.beta;
    v[7] = cfg.beta * cfg.beta;
  }
  return {v};
}

namespace {

DensityMatrix trace_to_neutrons(const ComplexVector& psi) {
  DensityMatrix rho;
  rho.mat = ComplexMatrix::Zero(4, 4);
  rho.subsystem_dims = {2, 2};
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (kBasis[i][2] == kBasis[j][2])
        rho.mat(2 * kBasis[i][0] + kBasis[i][1], 2 * kBasis[j][0] + kBasis[j][1]) +=
            psi[i] * std::conj(psi[j]);
  return rho;
}

}  // namespace

ProtocolResult run_protocol(const ScatterConfig& cfg) {
  ComplexVector psi = initial_state(cfg).amplitudes;
  EigenSystem h1 = qcore::hermitian_eigendecomposition(effective_hamiltonian(cfg, 1));
  EigenSystem h2 = qcore::hermitian_eigendecomposition(effective_hamiltonian(cfg, 2));
  psi = qcore::evolve(h1, cfg.tau, psi);
  for (int i = 0; i < 8; ++i) {
    double e = cfg.b_z * (cfg.n_spins - 2 * kBasis[i][2]) - cfg.j_exchange * cfg.n_spins;
    psi[i] *= std::exp(-I * e * cfg.tau_f_prime);
  }
  psi = qcore::evolve(h2, cfg.tau, psi);
  ProtocolResult out;
  out.final_state = {qcore::normalize_global_phase(psi)};
  out.rho_n = trace_to_neutrons(psi);
  return out;
}

double concurrence_closed_form(const ScatterConfig& cfg) {
  if (cfg.initial != Initial::A)
    throw WrongInitialState("concurrence_closed_form: defined for the single-magnon input only");
  cfg.validate();
  const double n = cfg.n_spins, lam = cfg.lambda, tau = cfg.tau;
  const DerivedParams p = derived_params(cfg);
  const double s2 = std::sin(p.phi * tau) * std::sin(p.phi * tau);
  if (cfg.coupling == Coupling::Isotropic) {
    const double under = (p.phi * p.varphi - 2.0 * lam * lam / n) *
                         (p.phi * p.phi - (4.0 * lam * lam / n) * s2);
    return 8.0 * std::sqrt(2.0) * lam * lam * s2 / (n * p.phi * p.phi * p.phi * p.varphi) *
           std::sqrt(std::max(under, 0.0));
  }
  const double c2 = std::cos(p.phi * tau) * std::cos(p.phi * tau);
  return 8.0 * lam * lam * s2 / (n * p.phi * p.phi * p.phi) *
         std::sqrt(cfg.b_z * cfg.b_z + (4.0 * lam * lam / n) * c2);
}

Landmarks landmarks(const ScatterConfig& cfg) {
  if (cfg.initial != Initial::A)
    throw WrongInitialState("landmarks: defined for the single-magnon input only");
  cfg.validate();
  const double n = cfg.n_spins, lam = cfg.lambda;
  const DerivedParams p = derived_params(cfg);
  Landmarks lm{};
  lm.b_star = lam * (1.0 - 1.0 / n);
  lm.tau_star = std::sqrt(n) / (4.0 * lam) * std::acos(-1.0 / 3.0);
  lm.t_phi = M_PI / p.phi;
  lm.c_inside = 4.0 / (3.0 * std::sqrt(3.0));
  lm.b_threshold_xy = std::sqrt(2.0) * lam / std::sqrt(n);
  if (cfg.coupling == Coupling::Isotropic) {
    lm.b_minus = lam * (1.0 - 1.0 / n - std::sqrt(2.0 / n));
    lm.b_plus = lam * (1.0 - 1.0 / n + std::sqrt(2.0 / n));
    const double arg = p.phi * std::sqrt(n) / (lam * std::sqrt(6.0));
    lm.tau_b = arg <= 1.0 ? std::asin(arg) / p.phi : lm.t_phi / 2.0;
    const double under = p.phi * p.varphi - 2.0 * lam * lam / n;
    lm.c_outside = 8.0 * std::sqrt(2.0) * lam * lam * std::abs(p.varphi - p.phi) *
                   std::sqrt(std::max(under, 0.0)) /
                   (n * p.phi * p.phi * p.phi * p.varphi);
  } else {
    lm.b_minus = 0.0;
    lm.b_plus = lm.b_threshold_xy;
    const double arg = (n * cfg.b_z * cfg.b_z + lam * lam) / (3.0 * lam * lam);
    lm.tau_b = arg <= 1.0 ? std::acos(-arg) / (2.0 * p.phi) : lm.t_phi / 2.0;
    lm.c_outside = 8.0 * cfg.b_z * lam * lam / (n * p.phi * p.phi * p.phi);
  }
  return lm;
}

double c1_neutron_sample(const ScatterConfig& cfg) {
  if (cfg.initial != Initial::A)
    throw WrongRegime("c1_neutron_sample: defined for the single-magnon input");
  if (cfg.b_z != 0.0) throw WrongRegime("c1_neutron_sample: zero-field expression");
  cfg.validate();
  const double n = cfg.n_spins, lam = cfg.lambda, tau = cfg.tau;
  const double arg = lam * (1.0 + 1.0 / n) * tau;
  const double under = n * n + 1.0 + 2.0 * n * std::cos(2.0 * arg);
  return 4.0 * std::sqrt(n) * std::abs(std::sin(arg)) * std::sqrt(std::max(under, 0.0)) /
         ((n + 1.0) * (n + 1.0));
}

double haroche_concurrence(double lambda_rate, double tau) {
  const double lt = lambda_rate * tau;
  const double v = 2.0 * (std::cos(lt) * std::cos(lt) *
                              std::abs(std::sin(std::sqrt(2.0) * lt) * std::sin(lt)) -
                          std::sin(lt) * std::sin(lt) *
                              std::abs(std::cos(std::sqrt(2.0) * lt) * std::cos(lt)));
  return v > 0.0 ? v : 0.0;
}

SiQuantities si_quantities(double a0, double n_spins) {
  if (a0 <= 0.0) throw OutOfRange("si_quantities: a0 must be positive");
  SiQuantities q{};
  q.lambda_si = si::g_n * si::mu_N * si::mu_0 * si::g_e * si::mu_B / (a0 * a0 * a0);
  q.b_star_t = 1e-32 / (a0 * a0 * a0);
  q.tau_star_s = 1e20 * a0 * a0 * a0 * std::sqrt(n_spins);
  return q;
}

// ---------------------------------------------------------------------------
// Reduced canonical basis oracle: all states of N+2 spins with at most two
// flips, evolved with the untruncated operators.

namespace {

struct CanonicalBasis {
  // spin index 0 = second neutron, 1 = first neutron, 2.. = sample sites
  int n_total;
  std::vector<std::pair<int, int>> flips;  // (-1,-1) none; (i,-1) single; (i,j) double, i<j

  explicit CanonicalBasis(int n_sample) : n_total(n_sample + 2) {
    flips.emplace_back(-1, -1);
    for (int i = 0; i < n_total; ++i) flips.emplace_back(i, -1);
    for (int i = 0; i < n_total; ++i)
      for (int j = i + 1; j < n_total; ++j) flips.emplace_back(i, j);
  }

  int dim() const { return int(flips.size()); }

  int index_of(int i, int j) const {  // j = -1 for single flips
    if (i < 0) return 0;
    if (j < 0) return 1 + i;
    return 1 + n_total + (i * (2 * n_total - i - 1)) / 2 + (j - i - 1);
  }

  bool flipped(int state, int spin) const {
    return flips[state].first == spin || flips[state].second == spin;
  }

  int flip_count(int state) const {
    if (flips[state].first < 0) return 0;
    return flips[state].second < 0 ? 1 : 2;
  }

  // Toggle helper: move a flip from `from` to `to` (from flipped, to not).
  int moved(int state, int from, int to) const {
    int a = flips[state].first, b = flips[state].second;
    if (a == from) a = to;
    else b = to;
    if (b >= 0 && a > b) std::swap(a, b);
    if (b < 0) return index_of(a, -1);
    return index_of(a, b);
  }
};

int sample_flip_count(const CanonicalBasis& basis, int s) {
  int c = 0;
  for (int a : {basis.flips[s].first, basis.flips[s].second})
    if (a >= 2) ++c;
  return c;
}

// Field on the sample plus the optional ring-exchange -J sum sigma.sigma,
// which is a multiple of the identity on the reachable symmetric sector.
void add_sample_terms(const ScatterConfig& cfg, const CanonicalBasis& basis, ComplexMatrix& h) {
  const int n = cfg.n_spins;
  const double j_ex = cfg.j_exchange;
  std::vector<std::pair<int, int>> bonds;  // ring adjacency over sample sites
  if (j_ex != 0.0) {
    for (int j = 2; j < basis.n_total; ++j) {
      int jn = j + 1 <= basis.n_total - 1 ? j + 1 : 2;
      if (n == 2 && j == 3) break;  // two sites share a single bond
      bonds.emplace_back(j, jn);
    }
  }
  for (int s = 0; s < basis.dim(); ++s) {
    h(s, s) += cfg.b_z * (n - 2 * sample_flip_count(basis, s));
    if (j_ex == 0.0) continue;
    int bonds_anti = 0;
    for (auto [j, jn] : bonds)
      if (basis.flipped(s, j) != basis.flipped(s, jn)) ++bonds_anti;
    h(s, s) += -j_ex * (double(bonds.size()) - 2.0 * bonds_anti);
    for (auto [j, jn] : bonds) {
      if (basis.flipped(s, j) && !basis.flipped(s, jn)) h(basis.moved(s, j, jn), s) += -2.0 * j_ex;
      if (!basis.flipped(s, j) && basis.flipped(s, jn)) h(basis.moved(s, jn, j), s) += -2.0 * j_ex;
    }
  }
}

// sigma_m . S_sample for neutron `m` (spin index 0 or 1); XY drops the zz part.
ComplexMatrix canonical_hamiltonian(const ScatterConfig& cfg, const CanonicalBasis& basis, int neutron) {
  const int n = cfg.n_spins;
  const double lam = cfg.lambda;
  const int m = neutron == 1 ? 1 : 0;
  ComplexMatrix h = ComplexMatrix::Zero(basis.dim(), basis.dim());
  add_sample_terms(cfg, basis, h);
  for (int s = 0; s < basis.dim(); ++s) {
    const int nm = basis.flipped(s, m) ? 1 : 0;
    if (cfg.coupling == Coupling::Isotropic)
      h(s, s) += (lam / n) * (1 - 2 * nm) * (n - 2 * sample_flip_count(basis, s));
    // 2 (lam/N) (s+_m s-_j + s-_m s+_j) summed over sample sites j
    if (nm == 0) {
      for (int a : {basis.flips[s].first, basis.flips[s].second})
        if (a >= 2) h(basis.moved(s, a, m), s) += 2.0 * lam / n;
    } else {
      for (int j = 2; j < basis.n_total; ++j)
        if (!basis.flipped(s, j)) h(basis.moved(s, m, j), s) += 2.0 * lam / n;
    }
  }
  return h;
}

ComplexMatrix canonical_free(const ScatterConfig& cfg, const CanonicalBasis& basis) {
  ComplexMatrix h = ComplexMatrix::Zero(basis.dim(), basis.dim());
  add_sample_terms(cfg, basis, h);
  return h;
}

}  // namespace

DensityMatrix full_basis_oracle(const ScatterConfig& cfg) {
  cfg.validate();
  if (cfg.n_spins > 14) throw TooLarge("full_basis_oracle: N capped at 14");
  const int n = cfg.n_spins;
  CanonicalBasis basis(n);

  ComplexVector psi = ComplexVector::Zero(basis.dim());
  if (cfg.initial == Initial::A) {
    for (int j = 0; j < n; ++j) psi[basis.index_of(2 + j, -1)] = 1.0 / std::sqrt(double(n));
  } else {
    psi[basis.index_of(-1, -1)] = cfg.alpha * cfg.alpha;
    psi[basis.index_of(1, -1)] = cfg.alpha * cfg.beta;   // first neutron flipped
    psi[basis.index_of(0, -1)] = cfg.alpha * cfg.beta;   // second neutron flipped
    psi[basis.index_of(0, 1)] = cfg.beta * cfg.beta;
  }

  EigenSystem h1 = qcore::hermitian_eigendecomposition(canonical_hamiltonian(cfg, basis, 1));
  EigenSystem h2 = qcore::hermitian_eigendecomposition(canonical_hamiltonian(cfg, basis, 2));
  EigenSystem h0 = qcore::hermitian_eigendecomposition(canonical_free(cfg, basis));
  psi = qcore::evolve(h1, cfg.tau, psi);
  psi = qcore::evolve(h0, cfg.tau_f_prime, psi);
  psi = qcore::evolve(h2, cfg.tau, psi);

  // trace out the sample: neutron configuration = (flip on 0, flip on 1)
  DensityMatrix rho;
  rho.mat = ComplexMatrix::Zero(4, 4);
  rho.subsystem_dims = {2, 2};
  auto sample_part = [&](int s) {
    std::pair<int, int> p{-1, -1};
    for (int a : {basis.flips[s].first, basis.flips[s].second})
      if (a >= 2) (p.first < 0 ? p.first : p.second) = a;
    return p;
  };
  for (int s1 = 0; s1 < basis.dim(); ++s1) {
    if (std::abs(psi[s1]) < 1e-300) continue;
    for (int s2 = 0; s2 < basis.dim(); ++s2) {
      if (sample_part(s1) != sample_part(s2)) continue;
      int r = 2 * (basis.flipped(s1, 0) ? 1 : 0) + (basis.flipped(s1, 1) ? 1 : 0);
      int c = 2 * (basis.flipped(s2, 0) ? 1 : 0) + (basis.flipped(s2, 1) ? 1 : 0);
      rho.mat(r, c) += psi[s1] * std::conj(psi[s2]);
    }
  }
  return rho;
}

}  // namespace spinlab::scatter
