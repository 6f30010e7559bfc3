#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include <spinlab/chains.hpp>
#include <spinlab/rng.hpp>

using namespace spinlab;
using namespace spinlab::chains;

namespace {

ChainSpec dipolar_open(int n) {
  ChainSpec s;
  s.n = n;
  return s;
}

ChainSpec dipolar_ring(int n) {
  ChainSpec s;
  s.n = n;
  s.geometry = Geometry::Ring;
  return s;
}

ChainSpec heisenberg(int n, Geometry g = Geometry::Open, double j = 0.5) {
  ChainSpec s;
  s.n = n;
  s.geometry = g;
  s.coupling = CouplingModel::Heisenberg;
  s.strength = j;
  return s;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1.0);
  return v;
}

}  // namespace

TEST_CASE("Hamiltonian structure") {
  // Heisenberg open N = 3: tridiagonal with off-diagonal -J and end-corrected
  // diagonal
  auto h3 = build_hamiltonian(heisenberg(3));
  CHECK(h3(0, 1).real() == doctest::Approx(-0.5));
  CHECK(h3(1, 2).real() == doctest::Approx(-0.5));
  CHECK(std::abs(h3(0, 2)) == 0.0);
  CHECK(h3(0, 0).real() == doctest::Approx(0.5));
  CHECK(h3(1, 1).real() == doctest::Approx(1.0));

  // dipolar open: on-site cost minimal and symmetric at the ends
  for (int n : {6, 15}) {
    auto h = build_hamiltonian(dipolar_open(n));
    for (int j = 1; j < n - 1; ++j) CHECK(h(0, 0).real() < h(j, j).real());
    for (int j = 0; j < n; ++j)
      CHECK(h(j, j).real() == doctest::Approx(h(n - 1 - j, n - 1 - j).real()).epsilon(1e-14));
  }

  // dipolar ring N = 6: antipodal coupling through distance 3
  auto h6 = build_hamiltonian(dipolar_ring(6));
  CHECK(h6(0, 3).real() == doctest::Approx(1.0 / 27.0));
  CHECK(h6(0, 5).real() == doctest::Approx(1.0));
  CHECK(h6(1, 5).real() == doctest::Approx(1.0 / 8.0));

  ChainSpec too_small;
  too_small.n = 1;
  CHECK_THROWS_AS(build_hamiltonian(too_small), InvalidGeometry);
  ChainSpec bad = dipolar_ring(6);
  bad.positions = {0, 1, 2, 3, 4, 5.5};
  CHECK_THROWS_AS(bad.validate(), InvalidGeometry);
}

TEST_CASE("numeric spectra: residuals and orthonormality") {
  CounterRng rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 3 + int(rng.uniform(0, 20));
    ChainSpec spec = trial % 2 ? dipolar_ring(n) : dipolar_open(n);
    auto h = build_hamiltonian(spec);
    auto sd = numeric_spectra(spec);
    for (int m = 0; m < n; ++m) {
      double res = (h.real() * sd.modes.col(m) - sd.energies[m] * sd.modes.col(m)).norm();
      CHECK(res < 1e-9);
    }
    Eigen::MatrixXd gram = sd.modes.transpose() * sd.modes;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("closed spectra: Heisenberg chains and rings") {
  // open: E_1 = 2B = 0 here, dispersion 2J(1 - cos(pi (m-1)/N))
  auto sd = closed_spectra(heisenberg(8));
  CHECK(sd.energies[0] == doctest::Approx(0.0));
  auto numeric = numeric_spectra(heisenberg(8));
  Eigen::VectorXd closed_sorted = sd.energies;
  std::sort(closed_sorted.data(), closed_sorted.data() + closed_sorted.size());
  CHECK((closed_sorted - numeric.energies).cwiseAbs().maxCoeff() < 1e-9);
  // eigenvector residuals against the numeric Hamiltonian
  auto h = build_hamiltonian(heisenberg(8));
  for (int m = 0; m < 8; ++m) {
    double res = (h.real() * sd.modes.col(m) - sd.energies[m] * sd.modes.col(m)).norm();
    CHECK(res < 1e-9);
  }

  // ring: E_n = -2J cos(2 pi n / N), compared as multisets with the numeric
  // circulant
  auto sdr = closed_spectra(heisenberg(9, Geometry::Ring));
  auto numr = numeric_spectra(heisenberg(9, Geometry::Ring));
  Eigen::VectorXd closed_r = sdr.energies;
  std::sort(closed_r.data(), closed_r.data() + closed_r.size());
  CHECK((closed_r - numr.energies).cwiseAbs().maxCoeff() < 1e-9);
  auto hr = build_hamiltonian(heisenberg(9, Geometry::Ring));
  for (int m = 0; m < 9; ++m) {
    double res = (hr.real() * sdr.modes.col(m) - sdr.energies[m] * sdr.modes.col(m)).norm();
    CHECK(res < 1e-9);
  }
}

TEST_CASE("closed spectra: dipolar ring, verbatim sum vs diagonalization") {
  // E_0 = 2 sum_{j<=N/2} 1/j^3 at N = 8
  auto sd8 = closed_spectra(dipolar_ring(8));
  double e0 = 2.0 * (1.0 + 1.0 / 8.0 + 1.0 / 27.0 + 1.0 / 64.0);
  CHECK(sd8.energies[0] == doctest::Approx(e0).epsilon(1e-14));

  // odd N: closed energies match the numeric off-diagonal spectrum exactly
  // (constant diagonal removed); even N: the closed form double-weighs the
  // antipodal bond, shifting mode n by (-1)^n 8/N^3
  for (int n : {5, 7, 9, 11}) {
    auto closed = closed_spectra(dipolar_ring(n));
    ChainSpec spec = dipolar_ring(n);
    auto h = build_hamiltonian(spec);
    double diag = h(0, 0).real();
    auto numeric = numeric_spectra(spec);
    std::vector<double> shifted(numeric.energies.data(), numeric.energies.data() + n);
    for (auto& e : shifted) e -= diag;
    std::vector<double> cl(closed.energies.data(), closed.energies.data() + n);
    std::sort(shifted.begin(), shifted.end());
    std::sort(cl.begin(), cl.end());
    for (int m = 0; m < n; ++m) CHECK(std::abs(cl[m] - shifted[m]) < 1e-10);
  }
  for (int n : {6, 8, 10, 12}) {
    auto closed = closed_spectra(dipolar_ring(n));
    ChainSpec spec = dipolar_ring(n);
    auto h = build_hamiltonian(spec);
    double diag = h(0, 0).real();
    // mode-resolved comparison through the circulant eigenvalue formula
    for (int m = 0; m < n; ++m) {
      double circulant = 0.0;
      for (int d = 1; d < n; ++d) {
        int dist = std::min(d, n - d);
        circulant += std::cos(2.0 * M_PI * m * d / n) / (dist * dist * dist);
      }
      double delta = closed.energies[m] - circulant;
      double expected = (m % 2 ? -8.0 : 8.0) / (double(n) * n * n);
      CHECK(delta == doctest::Approx(expected).epsilon(1e-9));
    }
    (void)diag;
  }
  CHECK_THROWS_AS(closed_spectra(dipolar_open(6)), NoClosedForm);
}

TEST_CASE("ring ground-state closed form equals the pair sum") {
  for (int n = 3; n <= 16; ++n) {
    double pair_sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        int d = std::min(j - i, n - (j - i));
        pair_sum += -1.0 / (double(d) * d * d);
      }
    CHECK(ring_ground_state_energy(n) == doctest::Approx(pair_sum).epsilon(1e-12));
  }
}

TEST_CASE("propagator basics and mirror symmetry") {
  auto spec = dipolar_open(7);
  CHECK(std::abs(propagator(spec, 3, 3, 0.0) - 1.0) < 1e-12);
  CHECK(std::abs(propagator(spec, 3, 5, 0.0)) < 1e-12);
  CounterRng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    double t = rng.uniform(0, 50);
    CHECK(std::abs(propagator(spec, 1, 7, t) - propagator(spec, 7, 1, t)) < 1e-12);
    CHECK(std::abs(propagator(spec, 2, 6, t) - propagator(spec, 6, 2, t)) < 1e-12);
    CHECK(std::abs(propagator(spec, 1, 7, t)) <= 1.0 + 1e-10);
  }
}

TEST_CASE("ring propagator: closed circulant form vs spectral form") {
  CounterRng rng(23);
  for (int n = 3; n <= 24; ++n) {
    ChainSpec spec = dipolar_ring(n);
    auto h = build_hamiltonian(spec);
    const double diag = h(0, 0).real();
    // energies consistent with the numeric Hamiltonian (antipodal once)
    RealVector energies(n);
    for (int m = 0; m < n; ++m) {
      double e = 0.0;
      for (int d = 1; d < n; ++d) {
        int dist = std::min(d, n - d);
        e += std::cos(2.0 * M_PI * m * d / n) / (double(dist) * dist * dist);
      }
      energies[m] = e + diag;
    }
    int s = 1, r = 1 + n / 2;
    for (int trial = 0; trial < (n <= 12 ? 100 : 20); ++trial) {
      double t = rng.uniform(0, 30);
      Complex closed = ring_propagator_closed(spec, s, r, t, energies);
      Complex spectral = propagator(spec, s, r, t);
      CHECK(std::abs(closed - spectral) < 1e-10);
    }
    // with the verbatim closed-form energies the even-N rings disagree - the
    // documented antipodal double count - while odd N agree exactly
    RealVector verbatim = closed_spectra(spec).energies;
    for (int m = 0; m < n; ++m) verbatim[m] += diag;
    double max_diff = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      double t = rng.uniform(0, 30);
      max_diff = std::max(max_diff,
                          std::abs(ring_propagator_closed(spec, s, r, t, verbatim) -
                                   propagator(spec, s, r, t)));
    }
    if (n % 2 == 1) CHECK(max_diff < 1e-10);
    else CHECK(max_diff > 1e-10);  // flagged, not silently reconciled
  }
}

TEST_CASE("fidelity trace bounds and the N = 2 exchange") {
  auto [fmax, tstar] = max_fidelity(heisenberg(2, Geometry::Open, 0.5), 1, 2, 30.0);
  CHECK(fmax >= 1.0 - 1e-9);

  auto grid = linspace(0.0, 30.0, 4000);
  auto tr = fidelity_trace(heisenberg(2, Geometry::Open, 0.5), 1, 2, grid);
  for (std::size_t i = 0; i < tr.fidelity.size(); ++i) {
    CHECK(tr.fidelity[i] >= 0.5 - 1e-12);
    CHECK(tr.fidelity[i] <= 1.0 + 1e-12);
    CHECK(tr.fidelity[i] ==
          doctest::Approx(tr.f_abs[i] / 3.0 + tr.f_abs[i] * tr.f_abs[i] / 6.0 + 0.5).epsilon(1e-12));
  }
}

TEST_CASE("fidelity is invariant under constant energy shifts") {
  // the averaged fidelity depends on |f| only, so adding c I to H changes
  // nothing; compare Heisenberg ring conventions (with/without diagonal)
  ChainSpec ring = heisenberg(7, Geometry::Ring);
  auto sd = numeric_spectra(ring);
  auto grid = linspace(0.0, 40.0, 500);
  auto tr = fidelity_trace(ring, 1, 4, grid);
  // manual propagator with shifted energies
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Complex f = 0.0;
    for (int m = 0; m < 7; ++m)
      f += sd.modes(3, m) * sd.modes(0, m) *
           std::exp(Complex(0, -1) * (sd.energies[m] + 17.3) * grid[i]);
    CHECK(std::abs(std::abs(f) - tr.f_abs[i]) < 1e-11);
  }
}

TEST_CASE("perfect and near-perfect dipolar transfer at small N") {
  // N = 2 and 3 top 0.999 within 1000/eps; the N = 4 revival that crosses
  // 0.999 sits near t = 2.3e4 (the first beat alone reaches 0.991)
  for (int n : {2, 3}) {
    auto [fmax, tstar] = max_fidelity(dipolar_open(n), 1, n, 1000.0);
    CHECK(fmax >= 0.999);
  }
  auto [fmax4, t4] = max_fidelity(dipolar_open(4), 1, 4, 25000.0);
  CHECK(fmax4 >= 0.999);
  // at the first-beat time itself the band amplitude leaks a little
  auto spec4 = dipolar_open(4);
  auto bsa4 = bound_state_analysis(spec4);
  auto tr = fidelity_trace(spec4, 1, 4, {bsa4.t0});
  CHECK(tr.fidelity[0] > 0.97);
}

TEST_CASE("bound-state analysis: t0* landmarks") {
  auto bsa4 = bound_state_analysis(dipolar_open(4));
  CHECK(bsa4.t0_star == doctest::Approx(0.568).epsilon(0.009));
  CHECK(bsa4.period == doctest::Approx(2.0 * bsa4.t0).epsilon(1e-12));

  // optimized placement r12 = r34 = 0.312 L, r23 = 0.375 L
  ChainSpec opt = dipolar_open(4);
  const double L = 3.0;
  opt.positions = {0.0, 0.312 * L, (0.312 + 0.375) * L, (0.312 + 0.375 + 0.312) * L};
  auto bsa_opt = bound_state_analysis(opt);
  CHECK(bsa_opt.t0_star == doctest::Approx(0.512).epsilon(0.01));

  // minimum of t0* over N in [2, 20] sits at N = 4
  double best = 1e300;
  int best_n = 0;
  for (int n = 2; n <= 20; ++n) {
    double v = bound_state_analysis(dipolar_open(n)).t0_star;
    if (v < best) {
      best = v;
      best_n = n;
    }
  }
  CHECK(best_n == 4);

  CHECK_THROWS_AS(bound_state_analysis(dipolar_ring(6)), WrongGeometry);
  CHECK_THROWS_AS(bound_state_analysis(heisenberg(6)), WrongGeometry);
}

TEST_CASE("first fidelity peak locks to pi / delta_lambda") {
  for (int n : {5, 8, 12}) {
    auto spec = dipolar_open(n);
    auto bsa = bound_state_analysis(spec);
    double t_peak = first_peak_time(spec);
    CHECK(std::abs(t_peak - bsa.t0) / bsa.t0 < 0.02);
  }
}

TEST_CASE("two-level model: Q, R, and the predicted splitting") {
  auto model = two_level_model(4, 14);
  CHECK(model.q == doctest::Approx(0.325).epsilon(0.02));
  CHECK(model.r == doctest::Approx(-0.957).epsilon(0.02));
  auto single = two_level_model(1, 4);
  CHECK(single.q == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(single.r == doctest::Approx(0.0).epsilon(1e-12));
  for (int n : {14, 20, 30}) {
    double exact = bound_state_analysis(dipolar_open(n)).t0_star;
    CHECK(std::abs(model.predicted_t0_star(n - 1.0) / exact - 1.0) < 0.05);
  }
  CHECK_THROWS_AS(two_level_model(5, 8), OutOfRange);
}

TEST_CASE("cubic scaling of the transfer time") {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (int n = 20; n <= 40; n += 2) {
    auto bsa = bound_state_analysis(dipolar_open(n));
    double x = std::log(n - 1.0), y = std::log(bsa.t0);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1;
  }
  double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  // approaches 3 from below: the two-level model's R/(QL) term still
  // contributes about -0.11 across this window (measured 2.8797)
  CHECK(slope > 2.85);
  CHECK(slope < 3.02);
}

TEST_CASE("encoded transfer: smoother oscillation, same period") {
  auto spec = dipolar_open(7);
  auto bsa = bound_state_analysis(spec);
  auto grid = linspace(0.4 * bsa.t0, 3.6 * bsa.t0, 9000);
  auto plain = fidelity_trace(spec, 1, 7, grid, 1);
  auto encoded = fidelity_trace(spec, 1, 7, grid, 2);
  CHECK(encoded.f_max > plain.f_max);
  // period: crest-to-crest spacing between the first two beats (parabola
  // vertices fitted over each beat window) agrees within 1%
  auto crest_vertex = [&](const FidelityTrace& tr, double lo, double hi) {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
    const double mid = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      if (tr.times[i] < lo || tr.times[i] > hi) continue;
      const double x = (tr.times[i] - mid) / (hi - lo), y = tr.fidelity[i], x2 = x * x;
      s0 += 1; s1 += x; s2 += x2; s3 += x2 * x; s4 += x2 * x2;
      b0 += y; b1 += x * y; b2 += x2 * y;
    }
    Eigen::Matrix3d m;
    m << s0, s1, s2, s1, s2, s3, s2, s3, s4;
    Eigen::Vector3d c = m.fullPivLu().solve(Eigen::Vector3d(b0, b1, b2));
    return mid - (hi - lo) * c[1] / (2.0 * c[2]);
  };
  double period_plain = crest_vertex(plain, 2.4 * bsa.t0, 3.6 * bsa.t0) -
                        crest_vertex(plain, 0.4 * bsa.t0, 1.6 * bsa.t0);
  double period_encoded = crest_vertex(encoded, 2.4 * bsa.t0, 3.6 * bsa.t0) -
                          crest_vertex(encoded, 0.4 * bsa.t0, 1.6 * bsa.t0);
  CHECK(std::abs(period_encoded - period_plain) < 0.01 * period_plain);
  // smoother: the ripple (total curvature) of the encoded trace is smaller
  double rough_plain = 0.0, rough_encoded = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    rough_plain += std::abs(plain.fidelity[i + 1] - 2 * plain.fidelity[i] + plain.fidelity[i - 1]);
    rough_encoded +=
        std::abs(encoded.fidelity[i + 1] - 2 * encoded.fidelity[i] + encoded.fidelity[i - 1]);
  }
  CHECK(rough_encoded < rough_plain);
}

TEST_CASE("nonuniform positions") {
  auto uniform = nonuniform_positions(10, 4, 4, 1.0);
  for (int j = 0; j < 10; ++j) CHECK(uniform[j] == doctest::Approx(double(j)));
  auto squeezed = nonuniform_positions(10, 4, 4, 0.5);
  CHECK(squeezed[5] - squeezed[4] == doctest::Approx(0.5));  // the single middle gap
  CHECK(squeezed[4] - squeezed[3] == doctest::Approx(1.0));
  CHECK(squeezed[9] == doctest::Approx(8.5));
  // mirror symmetry of the gap sequence
  for (int j = 0; j < 9; ++j) {
    double g1 = squeezed[j + 1] - squeezed[j];
    double g2 = squeezed[9 - j] - squeezed[8 - j];
    CHECK(g1 == doctest::Approx(g2));
  }
  CHECK_THROWS_AS(nonuniform_positions(10, 6, 4, 0.5), InvalidPartition);
  CHECK_THROWS_AS(nonuniform_positions(10, 4, 4, -1.0), InvalidPartition);
}

TEST_CASE("mirror-symmetric compression speeds the transfer up; asymmetry ruins it") {
  // compressing the five central gaps shortens the chain and the beat; a
  // single squeezed central gap instead detunes the middle pair and slows the
  // transfer down, so the speed-up needs a genuinely shorter span
  ChainSpec uniform = dipolar_open(10);
  ChainSpec squeezed = dipolar_open(10);
  squeezed.positions = nonuniform_positions(10, 2, 2, 0.5);
  auto bsa_u = bound_state_analysis(uniform);
  auto bsa_s = bound_state_analysis(squeezed);
  CHECK(bsa_s.t0 < bsa_u.t0);
  auto [fmax_s, t_s] = max_fidelity(squeezed, 1, 10, 1.3 * bsa_s.t0);
  CHECK(fmax_s > 0.9);

  ChainSpec skew = dipolar_open(10);
  skew.positions = nonuniform_positions(10, 2, 5, 0.6);
  auto [fmax_a, t_a] = max_fidelity(skew, 1, 10, 1000.0);
  CHECK(fmax_a < 2.0 / 3.0);
}

TEST_CASE("robustness Monte Carlo is seeded and reproducible") {
  double r1 = robustness_mc(3.0, 0.03, 200, 2.0 / 3.0, 42);
  double r2 = robustness_mc(3.0, 0.03, 200, 2.0 / 3.0, 42);
  CHECK(r1 == r2);
  // scale invariance: the statistics do not depend on the physical length
  double r_scaled = robustness_mc(7.0, 0.03, 200, 2.0 / 3.0, 42);
  CHECK(r1 == doctest::Approx(r_scaled).epsilon(1e-12));
  CHECK_THROWS_AS(robustness_mc(3.0, 2.0, 10, 0.5, 1), OutOfRange);
}

TEST_CASE("robustness statistics at the quoted disorder levels") {
  // displacement bound p l / 3 expressed as a fraction of L: 0.01 L -> p = 0.03.
  // With every spin displaced the three rates come out near 8%, 59% and 29%
  // against the quoted "rarely" / "more than 50%" / "25%".
  double rate_small = robustness_mc(3.0, 0.03, 1000, 2.0 / 3.0, 2026);
  CHECK(rate_small < 0.1);
  double rate_large = robustness_mc(3.0, 0.09, 1000, 2.0 / 3.0, 2026);
  CHECK(rate_large > 0.5);
  double rate_strict = robustness_mc(3.0, 0.03, 1000, 0.8, 2026);
  CHECK(rate_strict == doctest::Approx(0.25).epsilon(0.2));
}

TEST_CASE("dipolar ring even/odd alternation at the 1000/eps cutoff") {
  std::vector<double> fmax(21, 0.0);
  for (int n = 6; n <= 14; ++n) {
    ChainSpec spec = dipolar_ring(n);
    fmax[n] = max_fidelity(spec, 1, 1 + n / 2, 1000.0).first;
  }
  for (int n = 7; n <= 13; n += 2) {
    CHECK(fmax[n] < fmax[n - 1]);
    CHECK(fmax[n] < fmax[n + 1]);
  }
}
