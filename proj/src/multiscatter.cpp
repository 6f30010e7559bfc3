#include "spinlab/multiscatter.hpp"

#include "spinlab/entmeas.hpp"

#include <cmath>

namespace spinlab::multiscatter {

namespace {

const Complex I{0.0, 1.0};

void require_initial_a(const ScatterConfig& cfg, const char* where) {
  if (cfg.initial != scatter::Initial::A)
    throw WrongInitialState(std::string(where) + ": single-magnon input required");
}

// Energy of a flip parked on a non-participating neutron during one event.
double spectator_energy(const ScatterConfig& cfg) {
  double e = cfg.n_spins * cfg.b_z;
  if (cfg.coupling == scatter::Coupling::Isotropic) e += cfg.lambda;
  return e;
}

// 2x2 scattering block over (sample flip, neutron-m flip).
Eigen::Matrix2cd event_unitary(const ScatterConfig& cfg, double tau) {
  const double n = cfg.n_spins, lam = cfg.lambda, b = cfg.b_z;
  Eigen::Matrix2d h;
  const double offd = 2.0 * lam / std::sqrt(n);
  if (cfg.coupling == scatter::Coupling::Isotropic)
    h << lam * (1.0 - 2.0 / n) + b * (n - 2.0), offd, offd, n * b - lam;
  else
    h << b * (n - 2.0), offd, offd, n * b;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  Eigen::Vector2cd phases;
  phases << std::exp(-I * es.eigenvalues()[0] * tau), std::exp(-I * es.eigenvalues()[1] * tau);
  return es.eigenvectors().cast<Complex>() * phases.asDiagonal() *
         es.eigenvectors().transpose().cast<Complex>();
}

}  // namespace

PQRCoefficients pqr(const ScatterConfig& cfg) {
  require_initial_a(cfg, "pqr");
  cfg.validate();
  const auto dp = scatter::derived_params(cfg);
  const Complex e2 = std::exp(-2.0 * I * dp.phi * cfg.tau);
  const Complex e4 = std::exp(-4.0 * I * dp.phi * cfg.tau);
  PQRCoefficients out;
  out.p = dp.c * dp.c + dp.d * dp.d * e2;
  out.q = dp.c * dp.d * (1.0 - e2);
  out.r = dp.c * dp.c * dp.c * dp.d * (1.0 - e4);
  out.s = spectator_energy(cfg) - dp.lambda_phase;
  return out;
}

MultiState state_after_k(const ScatterConfig& cfg, int k) {
  require_initial_a(cfg, "state_after_k");
  cfg.validate();
  if (k < 1) throw OutOfRange("state_after_k: k must be at least 1");
  ComplexVector amp = ComplexVector::Zero(k + 1);
  amp[0] = 1.0;
  const Eigen::Matrix2cd u = event_unitary(cfg, cfg.tau);
  const Complex spectator = std::exp(-I * spectator_energy(cfg) * cfg.tau);
  const Complex free_sample = std::exp(-I * cfg.b_z * (cfg.n_spins - 2.0) * cfg.tau_f_prime);
  const Complex free_other = std::exp(-I * cfg.b_z * double(cfg.n_spins) * cfg.tau_f_prime);
  for (int m = 1; m <= k; ++m) {
    const Complex s0 = amp[0], nm = amp[m];
    amp[0] = u(0, 0) * s0 + u(0, 1) * nm;
    amp[m] = u(1, 0) * s0 + u(1, 1) * nm;
    for (int i = 1; i <= k; ++i)
      if (i != m) amp[i] *= spectator;
    if (m < k) {
      amp[0] *= free_sample;
      for (int i = 1; i <= k; ++i) amp[i] *= free_other;
    }
  }
  return {k, amp};
}

DensityMatrix reduce_pair(const MultiState& st, int m, int n) {
  if (m < 1 || n <= m || n > st.k) throw IndexOutOfRange("reduce_pair: need 1 <= m < n <= k");
  DensityMatrix rho;
  rho.mat = ComplexMatrix::Zero(4, 4);
  rho.subsystem_dims = {2, 2};
  double elsewhere = 0.0;
  for (int i = 0; i <= st.k; ++i)
    if (i != m && i != n) elsewhere += std::norm(st.amplitudes[i]);
  // |n_n n_m>: later neutron is the most significant label
  rho.mat(0, 0) = elsewhere;
  rho.mat(1, 1) = std::norm(st.amplitudes[m]);  // |01>: flip on m
  rho.mat(2, 2) = std::norm(st.amplitudes[n]);  // |10>: flip on n
  rho.mat(1, 2) = st.amplitudes[m] * std::conj(st.amplitudes[n]);
  rho.mat(2, 1) = std::conj(rho.mat(1, 2));
  return rho;
}

double pair_concurrence(const ScatterConfig& cfg, int m, int n) {
  if (m < 1 || n <= m) throw IndexOutOfRange("pair_concurrence: need 1 <= m < n");
  const PQRCoefficients c = pqr(cfg);
  return 2.0 * std::pow(std::abs(c.p), m + n - 2) * std::norm(c.q);
}

double pair_concurrence_brute(const ScatterConfig& cfg, int k, int m, int n) {
  if (n > k) throw IndexOutOfRange("pair_concurrence_brute: n exceeds the scatter count");
  MultiState st = state_after_k(cfg, k);
  return entmeas::concurrence(reduce_pair(st, m, n));
}

double pair_concurrence_closed(int n_spins, double lambda, double b_z, double tau, int m, int n) {
  ScatterConfig cfg;
  cfg.n_spins = n_spins;
  cfg.lambda = lambda;
  cfg.b_z = b_z;
  cfg.tau = tau;
  return pair_concurrence(cfg, m, n);
}

ZetaLandmarks zeta_landmarks(int n_spins, double lambda, double b_z, int m, int n) {
  if (m + n < 3) throw OutOfRange("zeta_landmarks: zeta = m + n must be at least 3");
  const double N = n_spins, lam = lambda;
  ZetaLandmarks out{};
  out.zeta = m + n;
  const double zeta = out.zeta;
  // Threshold in terms of the number of scattered neutrons; reduces to
  // (N+1)^2 / 2N at zero field.
  out.zeta_b = 1.0 + 1.0 / (2.0 * N) +
               (2.0 * b_z + N * (b_z - lam) * (b_z - lam) / lam) / (2.0 * lam);
  out.b_minus = lam * (1.0 - 1.0 / N - std::sqrt(2.0 * (zeta - 2.0) / N));
  out.b_plus = lam * (1.0 - 1.0 / N + std::sqrt(2.0 * (zeta - 2.0) / N));

  ScatterConfig cfg;
  cfg.n_spins = n_spins;
  cfg.lambda = lambda;
  cfg.b_z = b_z;
  const auto dp = scatter::derived_params(cfg);
  const double t_phi = M_PI / dp.phi;

  // C_{m,n}(tau) = 2 a u (1 - a u)^{(zeta-2)/2} with u = sin^2(phi tau) and
  // a = 4 c^2 d^2; the interior maximum exists iff a zeta > 2, i.e.
  // zeta >= zeta_b.
  const double a = 4.0 * dp.c * dp.c * dp.d * dp.d;
  out.double_peaked = zeta >= out.zeta_b;
  if (out.double_peaked) {
    out.c_peak = 4.0 * std::sqrt(std::pow(zeta - 2.0, zeta - 2.0) / std::pow(zeta, zeta));
    const double u_star = 2.0 / (a * zeta);
    out.tau_peak = std::acos(std::clamp(1.0 - 2.0 * u_star, -1.0, 1.0)) / (2.0 * dp.phi);
  } else {
    out.c_peak = 2.0 * a * std::pow(1.0 - a, (zeta - 2.0) / 2.0);
    out.tau_peak = t_phi / 2.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polarized-sample evolution: neutrons as bits, sample as a symmetric ladder
// level f in [0, k].

namespace {

struct PolarizedSpace {
  int k;
  int levels;                              // k + 1 sample levels
  int dim() const { return (1 << k) * levels; }
  int index(int mask, int f) const { return mask * levels + f; }
};

// (neutron bit, sample level) pair Hamiltonian during one event.
ComplexMatrix pair_hamiltonian(const ScatterConfig& cfg, int levels) {
  const double n = cfg.n_spins, lam = cfg.lambda, b = cfg.b_z;
  ComplexMatrix h = ComplexMatrix::Zero(2 * levels, 2 * levels);
  for (int bit = 0; bit < 2; ++bit)
    for (int f = 0; f < levels; ++f) {
      int i = bit * levels + f;
      h(i, i) = b * (n - 2.0 * f);
      if (cfg.coupling == scatter::Coupling::Isotropic)
        h(i, i) += (lam / n) * (1 - 2 * bit) * (n - 2.0 * f);
    }
  for (int f = 0; f + 1 < levels; ++f) {
    // (bit=1, f) <-> (bit=0, f+1)
    const double amp = 2.0 * (lam / n) * std::sqrt((n - f) * (f + 1.0));
    h(1 * levels + f, 0 * levels + f + 1) = amp;
    h(0 * levels + f + 1, 1 * levels + f) = amp;
  }
  return h;
}

ComplexVector polarized_evolve(const ScatterConfig& cfg, int k) {
  PolarizedSpace sp{k, k + 1};
  ComplexVector psi = ComplexVector::Zero(sp.dim());
  for (int mask = 0; mask < (1 << k); ++mask) {
    Complex amp = 1.0;
    for (int i = 0; i < k; ++i) amp *= ((mask >> i) & 1) ? cfg.beta : cfg.alpha;
    psi[sp.index(mask, 0)] = amp;
  }
  EigenSystem es = qcore::hermitian_eigendecomposition(pair_hamiltonian(cfg, sp.levels));
  ComplexMatrix u = es.eigenvectors;
  ComplexVector ph(es.eigenvalues.size());
  for (Eigen::Index j = 0; j < ph.size(); ++j) ph[j] = std::exp(-I * es.eigenvalues[j] * cfg.tau);
  ComplexMatrix u_event = u * ph.asDiagonal() * u.adjoint();

  ComplexVector scratch(2 * sp.levels);
  for (int m = 0; m < k; ++m) {
    ComplexVector next = ComplexVector::Zero(sp.dim());
    for (int other = 0; other < (1 << k); ++other) {
      if ((other >> m) & 1) continue;  // enumerate contexts with bit m cleared
      for (int bit = 0; bit < 2; ++bit)
        for (int f = 0; f < sp.levels; ++f)
          scratch[bit * sp.levels + f] = psi[sp.index(other | (bit << m), f)];
      scratch = u_event * scratch;
      for (int bit = 0; bit < 2; ++bit)
        for (int f = 0; f < sp.levels; ++f)
          next[sp.index(other | (bit << m), f)] = scratch[bit * sp.levels + f];
    }
    psi.swap(next);
    if (m + 1 < k) {
      for (int mask = 0; mask < (1 << k); ++mask)
        for (int f = 0; f < sp.levels; ++f)
          psi[sp.index(mask, f)] *=
              std::exp(-I * cfg.b_z * (cfg.n_spins - 2.0 * f) * cfg.tau_f_prime);
    }
  }
  return psi;
}

}  // namespace

DensityMatrix polarized_pair_state(const ScatterConfig& cfg, int k, int m, int n) {
  if (cfg.initial != scatter::Initial::B)
    throw WrongInitialState("polarized_oracle: polarized-sample input required");
  cfg.validate();
  if (k > 12) throw TooLarge("polarized_oracle: k capped at 12");
  if (m < 1 || n <= m || n > k) throw IndexOutOfRange("polarized_oracle: need 1 <= m < n <= k");
  PolarizedSpace sp{k, k + 1};
  ComplexVector psi = polarized_evolve(cfg, k);
  // reduce to neutrons (m, n); |n_n n_m> ordering, later neutron first
  DensityMatrix rho;
  rho.mat = ComplexMatrix::Zero(4, 4);
  rho.subsystem_dims = {2, 2};
  const int bm = 1 << (m - 1), bn = 1 << (n - 1), rest = ~(bm | bn);
  for (int mask = 0; mask < (1 << k); ++mask) {
    const int row = 2 * ((mask & bn) ? 1 : 0) + ((mask & bm) ? 1 : 0);
    for (int mask2 = 0; mask2 < (1 << k); ++mask2) {
      if ((mask & rest) != (mask2 & rest)) continue;
      const int col = 2 * ((mask2 & bn) ? 1 : 0) + ((mask2 & bm) ? 1 : 0);
      for (int f = 0; f < sp.levels; ++f)
        rho.mat(row, col) += psi[sp.index(mask, f)] * std::conj(psi[sp.index(mask2, f)]);
    }
  }
  return rho;
}

double polarized_oracle(const ScatterConfig& cfg, int k, int m, int n) {
  return entmeas::concurrence(polarized_pair_state(cfg, k, m, n));
}

double average_pair_concurrence(const ScatterConfig& cfg, int t) {
  if (t < 2) throw OutOfRange("average_pair_concurrence: t must be at least 2");
  double sum = 0.0;
  int count = 0;
  for (int m = 1; m < t; ++m)
    for (int n = m + 1; n <= t; ++n) {
      sum += cfg.initial == scatter::Initial::A ? pair_concurrence(cfg, m, n)
                                                : polarized_oracle(cfg, t, m, n);
      ++count;
    }
  return sum / count;
}

PairConcurrenceTable pair_table(const ScatterConfig& cfg, int k) {
  PairConcurrenceTable table;
  table.config = cfg;
  for (int m = 1; m < k; ++m)
    for (int n = m + 1; n <= k; ++n) {
      double c = cfg.initial == scatter::Initial::A ? pair_concurrence(cfg, m, n)
                                                    : polarized_oracle(cfg, k, m, n);
      table.entries[{m, n}] = c;
      table.entries[{n, m}] = c;
    }
  return table;
}

}  // namespace spinlab::multiscatter
