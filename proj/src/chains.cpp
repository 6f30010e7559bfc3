#include "spinlab/chains.hpp"

#include <algorithm>
#include <cmath>

#include "spinlab/rng.hpp"

namespace spinlab::chains {

namespace {
const Complex I{0.0, 1.0};

double cube(double x) { return x * x * x; }

// Golden-section refinement of a bracketed maximum.
template <typename F>
double golden_max(F&& f, double a, double b, double rel_tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > rel_tol * (std::abs(a) + std::abs(b) + 1e-12)) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> ChainSpec::resolved_positions() const {
  if (!positions.empty()) return positions;
  std::vector<double> p(n);
  for (int j = 0; j < n; ++j) p[j] = j;
  return p;
}

void ChainSpec::validate() const {
  if (n < 2) throw InvalidGeometry("ChainSpec: at least two spins required");
  if (strength <= 0.0) throw InvalidGeometry("ChainSpec: coupling strength must be positive");
  if (!positions.empty()) {
    if (int(positions.size()) != n)
      throw InvalidGeometry("ChainSpec: positions must match the spin count");
    for (std::size_t j = 1; j < positions.size(); ++j)
      if (positions[j] <= positions[j - 1])
        throw InvalidGeometry("ChainSpec: positions must strictly increase");
    if (geometry == Geometry::Ring) {
      const double gap = positions[1] - positions[0];
      for (std::size_t j = 1; j < positions.size(); ++j)
        if (std::abs(positions[j] - positions[j - 1] - gap) > 1e-12)
          throw InvalidGeometry("ChainSpec: a ring requires uniform spacing");
    }
  }
}

ComplexMatrix build_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const double g = spec.strength;
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  if (spec.coupling == CouplingModel::Heisenberg) {
    if (spec.geometry == Geometry::Open) {
      // single-flip block of -J/2 sum sigma.sigma - B sum sigma_z, ground at 0
      for (int j = 0; j < n; ++j) {
        h(j, j) = g * ((j == 0 || j == n - 1) ? 1.0 : 2.0);
        if (j + 1 < n) h(j, j + 1) = h(j + 1, j) = -g;
      }
    } else {
      // circulant hopping; the constant diagonal is dropped as in the
      // closed-form spectrum -2J cos(2 pi n / N)
      for (int j = 0; j < n; ++j) {
        h(j, (j + 1) % n) = -g;
        h((j + 1) % n, j) = -g;
      }
    }
    return h;
  }
  // dipolar
  const std::vector<double> pos = spec.resolved_positions();
  if (spec.geometry == Geometry::Open) {
    for (int j = 0; j < n; ++j)
      for (int jp = 0; jp < n; ++jp) {
        if (j == jp) continue;
        const double r = std::abs(pos[j] - pos[jp]);
        h(j, jp) = g / cube(r);
        h(j, j) += 2.0 * g / cube(r);  // spin-flip cost relative to the ground state
      }
  } else {
    for (int j = 0; j < n; ++j)
      for (int jp = 0; jp < n; ++jp) {
        if (j == jp) continue;
        int d = std::abs(j - jp);
        d = std::min(d, n - d);  // minimum image
        h(j, jp) = g / cube(double(d));
        h(j, j) += 2.0 * g / cube(double(d));
      }
  }
  return h;
}

SpectralData numeric_spectra(const ChainSpec& spec) {
  EigenSystem es = qcore::hermitian_eigendecomposition(build_hamiltonian(spec));
  SpectralData sd;
  sd.energies = es.eigenvalues;
  sd.modes = es.eigenvectors.real();
  // the Hamiltonians here are real symmetric; keep the real eigenbasis
  return sd;
}

SpectralData closed_spectra(const ChainSpec& spec) {
  spec.validate();
  if (!spec.positions.empty()) {
    std::vector<double> uni = ChainSpec{spec.geometry, spec.coupling, spec.n, spec.strength, {}}.resolved_positions();
    for (int j = 0; j < spec.n; ++j)
      if (std::abs(spec.positions[j] - spec.positions[0] - uni[j]) > 1e-12)
        throw NoClosedForm("closed_spectra: uniform spacing required");
  }
  const int n = spec.n;
  const double g = spec.strength;
  SpectralData sd;
  sd.energies.resize(n);
  sd.modes.resize(n, n);
  if (spec.coupling == CouplingModel::Heisenberg && spec.geometry == Geometry::Open) {
    // E_m = 2B + 2J(1 - cos(pi (m-1)/N)) with B = 0 here; cosine modes
    for (int m = 1; m <= n; ++m) {
      sd.energies[m - 1] = 2.0 * g * (1.0 - std::cos(M_PI * (m - 1) / n));
      const double am = m == 1 ? 1.0 / std::sqrt(double(n)) : std::sqrt(2.0 / n);
      for (int j = 1; j <= n; ++j)
        sd.modes(j - 1, m - 1) = am * std::cos(M_PI / (2.0 * n) * (m - 1) * (2 * j - 1));
    }
    return sd;
  }
  if (spec.geometry != Geometry::Ring)
    throw NoClosedForm("closed_spectra: the open dipolar chain is numeric only");
  // ring geometries: energies indexed by Bloch mode number 0..n-1, mode table
  // as the real orthonormal cos/sin combinations of the degenerate pairs
  for (int m = 0; m < n; ++m) {
    const double km = 2.0 * M_PI * m / n;
    if (spec.coupling == CouplingModel::Heisenberg) {
      sd.energies[m] = -2.0 * g * std::cos(km);
    } else {
      double e = 0.0;
      for (int j = 1; j <= n / 2; ++j) e += std::cos(km * j) / cube(double(j));
      sd.energies[m] = 2.0 * g * e;  // verbatim closed form; antipodal bond twice for even n
    }
    const bool self_paired = m == 0 || 2 * m == n;
    const double norm = self_paired ? 1.0 / std::sqrt(double(n)) : std::sqrt(2.0 / n);
    for (int j = 0; j < n; ++j)
      sd.modes(j, m) = 2 * m <= n ? norm * std::cos(km * j) : norm * std::sin(km * j);
  }
  return sd;
}

Complex propagator(const ChainSpec& spec, int s, int r, double t) {
  if (s < 1 || s > spec.n || r < 1 || r > spec.n)
    throw IndexOutOfRange("propagator: sites are 1-based and bounded by n");
  SpectralData sd = numeric_spectra(spec);
  Complex f = 0.0;
  for (int m = 0; m < spec.n; ++m)
    f += sd.modes(r - 1, m) * sd.modes(s - 1, m) * std::exp(-I * sd.energies[m] * t);
  return f;
}

Complex ring_propagator_closed(const ChainSpec& spec, int s, int r, double t,
                               const RealVector& energies) {
  if (spec.geometry != Geometry::Ring) throw WrongGeometry("ring_propagator_closed: ring only");
  const int n = spec.n;
  Complex f = 0.0;
  for (int m = 0; m < n; ++m)
    f += std::exp(I * (2.0 * M_PI * m * (r - s)) / double(n)) * std::exp(-I * energies[m] * t);
  return f / double(n);
}

double ring_ground_state_energy(int n) {
  double sum = 0.0;
  if (n % 2 == 0) {
    for (int j = 1; j <= n / 2 - 1; ++j) sum += 1.0 / cube(double(j));
    return -n * sum - 4.0 / (n * n);  // the tail term is the once-counted antipodal bond
  }
  for (int j = 1; j <= (n - 1) / 2; ++j) sum += 1.0 / cube(double(j));
  return -n * sum;
}

namespace {

// Modal weights w_m with f(t) = sum_m w_m exp(-i E_m t).
struct ModalPropagator {
  RealVector energies;
  RealVector weights;

  Complex operator()(double t) const {
    Complex f = 0.0;
    for (Eigen::Index m = 0; m < energies.size(); ++m)
      f += weights[m] * std::exp(-I * energies[m] * t);
    return f;
  }
};

ModalPropagator modal_weights(const ChainSpec& spec, int s, int r, int encoded_k) {
  SpectralData sd = numeric_spectra(spec);
  const int n = spec.n;
  ModalPropagator mp;
  mp.energies = sd.energies;
  mp.weights.resize(n);
  if (encoded_k <= 1) {
    for (int m = 0; m < n; ++m) mp.weights[m] = sd.modes(r - 1, m) * sd.modes(s - 1, m);
    return mp;
  }
  if (encoded_k >= n) throw OutOfRange("fidelity_trace: encoded_k must be below n");
  // sender = renormalised first-k amplitudes of the lowest bound state,
  // receiver = the mirror image of the same coefficients
  Eigen::VectorXd c = sd.modes.col(0).head(encoded_k);
  c /= c.norm();
  for (int m = 0; m < n; ++m) {
    double send = 0.0, recv = 0.0;
    for (int j = 0; j < encoded_k; ++j) {
      send += c[j] * sd.modes(j, m);
      recv += c[j] * sd.modes(n - 1 - j, m);
    }
    mp.weights[m] = send * recv;
  }
  return mp;
}

double min_beat_period(const RealVector& energies) {
  const double spread = energies.maxCoeff() - energies.minCoeff();
  return spread > 0.0 ? 2.0 * M_PI / spread : 1.0;
}

// Dense |f| scan over [t_lo, t_hi] using per-mode phase recurrences; returns
// the grid time of the largest value.  Phase drift over the scan is far below
// the golden-section refinement window that follows.
double scan_propagator_peak(const ModalPropagator& mp, double t_lo, double t_hi, double step) {
  const Eigen::Index n = mp.energies.size();
  ComplexVector phase(n), rot(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    phase[m] = std::exp(-I * mp.energies[m] * t_lo);
    rot[m] = std::exp(-I * mp.energies[m] * step);
  }
  double best = -1.0, best_t = t_lo;
  const long steps = long((t_hi - t_lo) / step) + 1;
  for (long j = 0; j <= steps; ++j) {
    Complex f = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) f += mp.weights[m] * phase[m];
    const double v = std::abs(f);
    if (v > best) {
      best = v;
      best_t = t_lo + j * step;
    }
    for (Eigen::Index m = 0; m < n; ++m) phase[m] *= rot[m];
  }
  return best_t;
}

}  // namespace

FidelityTrace fidelity_trace(const ChainSpec& spec, int s, int r,
                             const std::vector<double>& t_grid, int encoded_k) {
  if (t_grid.empty()) throw OutOfRange("fidelity_trace: empty time grid");
  const ModalPropagator mp = modal_weights(spec, s, r, encoded_k);
  FidelityTrace tr;
  tr.times = t_grid;
  tr.f_abs.reserve(t_grid.size());
  tr.fidelity.reserve(t_grid.size());
  tr.f_max = 0.0;
  tr.t_at_max = t_grid.front();
  for (double t : t_grid) {
    const double fa = std::abs(mp(t));
    tr.f_abs.push_back(fa);
    tr.fidelity.push_back(averaged_fidelity(fa));
    if (tr.fidelity.back() > tr.f_max) {
      tr.f_max = tr.fidelity.back();
      tr.t_at_max = t;
    }
  }
  return tr;
}

std::pair<double, double> max_fidelity(const ChainSpec& spec, int s, int r, double t_cutoff) {
  if (t_cutoff <= 0.0) throw OutOfRange("max_fidelity: cutoff must be positive");
  const ModalPropagator mp = modal_weights(spec, s, r, 1);
  const double step = min_beat_period(mp.energies) / 50.0;
  const double best_t = scan_propagator_peak(mp, 0.0, t_cutoff, step);
  auto objective = [&](double t) { return std::abs(mp(t)); };
  const double lo = std::max(0.0, best_t - step), hi = std::min(t_cutoff, best_t + step);
  const double t_star = golden_max(objective, lo, hi, 1e-8);
  const double t_grid_best = objective(best_t) > objective(t_star) ? best_t : t_star;
  return {averaged_fidelity(objective(t_grid_best)), t_grid_best};
}

double first_peak_time(const ChainSpec& spec) {
  // The delocalized band rides on the slow bound-state beat as a fast ripple
  // that pulls a raw argmax several percent off the envelope crest.  The
  // crest is located in two stages: a boxcar-smoothed scan for a rough
  // position, then a least-squares parabola over the surrounding window.
  const ModalPropagator mp = modal_weights(spec, 1, spec.n, 1);
  const double delta = mp.energies[1] - mp.energies[0];
  const double horizon = 1.25 * M_PI / delta;
  const double t_min = min_beat_period(mp.energies);
  const double step = t_min / 50.0;
  const long n_samples = long(horizon / step) + 1;
  const long half = std::max(1L, long(10.0 * t_min / step));

  std::vector<double> fbar(n_samples);
  ComplexVector phase = ComplexVector::Ones(mp.energies.size()), rot(mp.energies.size());
  for (Eigen::Index m = 0; m < mp.energies.size(); ++m)
    rot[m] = std::exp(-I * mp.energies[m] * step);
  for (long i = 0; i < n_samples; ++i) {
    Complex f = 0.0;
    for (Eigen::Index m = 0; m < mp.energies.size(); ++m) f += mp.weights[m] * phase[m];
    fbar[i] = averaged_fidelity(std::abs(f));
    for (Eigen::Index m = 0; m < mp.energies.size(); ++m) phase[m] *= rot[m];
  }
  double running = 0.0;
  for (long i = 0; i < std::min(2 * half + 1, n_samples); ++i) running += fbar[i];
  double best = -1.0;
  long rough = half;
  for (long i = half; i + half + 1 < n_samples; ++i) {
    if (running > best) {
      best = running;
      rough = i;
    }
    running += fbar[i + half + 1] - fbar[i - half];
  }

  // parabola fit over [0.6, 1.4] of the rough crest time
  const long i0 = std::max(0L, long(0.6 * rough)), i1 = std::min(n_samples - 1, long(1.4 * rough));
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
  const double scale = rough * step;
  for (long i = i0; i <= i1; ++i) {
    const double x = (i * step - scale) / scale;
    const double y = fbar[i];
    const double x2 = x * x;
    s0 += 1; s1 += x; s2 += x2; s3 += x2 * x; s4 += x2 * x2;
    b0 += y; b1 += x * y; b2 += x2 * y;
  }
  Eigen::Matrix3d m;
  m << s0, s1, s2, s1, s2, s3, s2, s3, s4;
  Eigen::Vector3d coeff = m.fullPivLu().solve(Eigen::Vector3d(b0, b1, b2));
  if (coeff[2] >= 0.0) return scale;  // degenerate fit; keep the rough crest
  return scale * (1.0 - coeff[1] / (2.0 * coeff[2]));
}

BoundStateAnalysis bound_state_analysis(const ChainSpec& spec) {
  if (spec.geometry != Geometry::Open || spec.coupling != CouplingModel::Dipolar)
    throw WrongGeometry("bound_state_analysis: open dipolar chains only");
  SpectralData sd = numeric_spectra(spec);
  BoundStateAnalysis out;
  out.delta_lambda = sd.energies[1] - sd.energies[0];
  out.period = 2.0 * M_PI / out.delta_lambda;
  out.t0 = M_PI / out.delta_lambda;
  const std::vector<double> pos = spec.resolved_positions();
  const double span = pos.back() - pos.front();
  out.t0_star = out.t0 / cube(span);
  return out;
}

double TwoLevelModel::predicted_splitting(double chain_length) const {
  return 2.0 * (q / cube(chain_length) + r / (cube(chain_length) * chain_length));
}

double TwoLevelModel::predicted_t0_star(double chain_length) const {
  return M_PI / (predicted_splitting(chain_length) * cube(chain_length));
}

TwoLevelModel two_level_model(int i, int n_sub) {
  if (i < 1 || 2 * i > n_sub) throw OutOfRange("two_level_model: require 1 <= i <= n_sub / 2");
  ChainSpec spec;
  spec.n = n_sub;
  ComplexMatrix h = build_hamiltonian(spec);
  ComplexMatrix sub = h.topLeftCorner(i, i);
  EigenSystem es = qcore::hermitian_eigendecomposition(sub);
  Eigen::VectorXd a = es.eigenvectors.col(0).real();
  if (a[0] < 0.0) a = -a;
  TwoLevelModel out;
  out.a_coeffs.assign(a.data(), a.data() + i);
  out.q = 0.0;
  out.r = 0.0;
  for (int nn = 1; nn <= i; ++nn)
    for (int mm = 1; mm <= i; ++mm) {
      out.q += a[nn - 1] * a[mm - 1];
      out.r += 3.0 * a[nn - 1] * a[mm - 1] * (mm + nn - 2);
    }
  return out;
}

std::vector<double> nonuniform_positions(int n, int i, int f, double delta) {
  if (delta <= 0.0) throw InvalidPartition("nonuniform_positions: delta must be positive");
  if (i < 0 || f < 0 || i + f >= n)
    throw InvalidPartition("nonuniform_positions: need i + f < n");
  std::vector<double> pos(n);
  double x = 0.0;
  pos[0] = 0.0;
  for (int j = 1; j < n; ++j) {
    const int gap_index = j - 1;  // gaps are 0..n-2
    const bool leading = gap_index < i;
    const bool trailing = gap_index >= n - 1 - f;
    x += (leading || trailing) ? 1.0 : delta;
    pos[j] = x;
  }
  return pos;
}

double robustness_mc(double l, double p, int iterations, double threshold, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw OutOfRange("robustness_mc: p must lie in [0,1]");
  ChainSpec base;
  base.n = 4;
  base.positions = {0.0, l / 3.0, 2.0 * l / 3.0, l};
  const BoundStateAnalysis unperturbed = bound_state_analysis(base);
  const double t0 = unperturbed.t0;  // = l^3 t0*(4)
  int failures = 0;
  for (int it = 0; it < iterations; ++it) {
    CounterRng rng(seed, std::uint64_t(it));
    ChainSpec spec = base;
    for (int j = 0; j < 4; ++j)
      spec.positions[j] += rng.uniform(-p * l / 3.0, p * l / 3.0);
    std::sort(spec.positions.begin(), spec.positions.end());
    const double fa = std::abs(propagator(spec, 1, 4, t0));
    if (averaged_fidelity(fa) < threshold) ++failures;
  }
  return double(failures) / iterations;
}

}  // namespace spinlab::chains
