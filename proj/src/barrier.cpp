#include "spinlab/barrier.hpp"

#include <algorithm>
#include <cmath>

namespace spinlab::barrier {

namespace {
const Complex I{0.0, 1.0};
}

void BarrierConfig::validate() const {
  if (big_l <= l) throw OutOfRange("BarrierConfig: the box must exceed the barrier");
  if (l <= 0.0 || w <= 0.0 || k0 <= 0.0) throw OutOfRange("BarrierConfig: l, w, k0 must be positive");
  if (n_modes < 3 || n_modes % 2 == 0) throw OutOfRange("BarrierConfig: n_modes must be odd and >= 3");
}

ModeCoefficients mode_coefficients(double k, double b_z, double l, Spin spin) {
  if (k <= 0.0) throw OutOfRange("mode_coefficients: k must be positive");
  ModeCoefficients mc;
  mc.k = k;
  const double sign = spin == Spin::Up ? 1.0 : -1.0;
  mc.q = std::sqrt(Complex(k * k - 2.0 * b_z * sign, 0.0));
  const Complex q = mc.q;
  const Complex s = std::sin(q * l), c = std::cos(q * l);
  // Matching wavefunctions and derivatives at both boundaries gives
  //   T' = 2kq e^{-ikl} / (2kq cos(ql) - i(k^2+q^2) sin(ql))
  // with the region-2 amplitudes following from continuity at x = l.
  const Complex den = 2.0 * k * q * c - I * (k * k + q * q) * s;
  mc.r = I * (q * q - k * k) * s / den;
  mc.t_prime = 2.0 * k * q * std::exp(-I * k * l) / den;
  const Complex tl = mc.t_prime * std::exp(I * k * l);
  mc.t = tl * (q + k) / (2.0 * q) * std::exp(-I * q * l);
  mc.r_prime = tl * (q - k) / (2.0 * q) * std::exp(I * q * l);
  return mc;
}

namespace {

// Region-wise eigenfunction for one mode.
Complex mode_value(const ModeCoefficients& mc, double l, double x) {
  if (x < 0.0) return std::exp(I * mc.k * x) + mc.r * std::exp(-I * mc.k * x);
  if (x < l) return mc.t * std::exp(I * mc.q * x) + mc.r_prime * std::exp(-I * mc.q * x);
  return mc.t_prime * std::exp(I * mc.k * x);
}

struct ModeSet {
  std::vector<double> ks;
  std::vector<Complex> weights;           // Gaussian envelope with the x0 phase
  std::vector<ModeCoefficients> up, down;
};

ModeSet build_modes(const BarrierConfig& cfg) {
  cfg.validate();
  ModeSet ms;
  const double dk = 2.0 * M_PI / cfg.big_l;
  const int m0 = int(std::lround(cfg.k0 / dk));
  const double norm = std::pow(M_PI / (2.0 * cfg.w * cfg.w), -0.25);
  for (int m = m0 - cfg.n_modes / 2; m <= m0 + cfg.n_modes / 2; ++m) {
    const double k = m * dk;
    if (k <= 0.0) continue;  // left-movers carry negligible weight
    ms.ks.push_back(k);
    const double dkk = k - cfg.k0;
    ms.weights.push_back(norm * std::exp(-I * dkk * cfg.x0) * std::exp(-dkk * dkk * cfg.w * cfg.w));
    ms.up.push_back(mode_coefficients(k, cfg.b_z, cfg.l, Spin::Up));
    ms.down.push_back(mode_coefficients(k, cfg.b_z, cfg.l, Spin::Down));
  }
  return ms;
}

}  // namespace

namespace {
bool same_config(const BarrierConfig& a, const BarrierConfig& b) {
  return a.big_l == b.big_l && a.l == b.l && a.b_z == b.b_z && a.k0 == b.k0 &&
         a.x0 == b.x0 && a.w == b.w && a.n_modes == b.n_modes;
}
}  // namespace

Spinor wavepacket(const BarrierConfig& cfg, double x, double t) {
  static thread_local BarrierConfig cached_cfg{.n_modes = -1};
  static thread_local ModeSet cached;
  // Rebuild the mode table only when the configuration changes.
  if (cached_cfg.n_modes < 0 || !same_config(cached_cfg, cfg)) {
    cached = build_modes(cfg);
    cached_cfg = cfg;
  }
  const ModeSet& ms = cached;
  Spinor out{0.0, 0.0};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);  // initial spin along +x
  for (std::size_t i = 0; i < ms.ks.size(); ++i) {
    const double k = ms.ks[i];
    const Complex phase = ms.weights[i] * std::exp(-I * 0.5 * k * k * t);
    out.up += inv_sqrt2 * phase * mode_value(ms.up[i], cfg.l, x);
    out.down += inv_sqrt2 * phase * mode_value(ms.down[i], cfg.l, x);
  }
  return out;
}

ArrivalTrace arrival_distribution(const BarrierConfig& cfg, double x_out,
                                  double t_min, double t_max, int samples) {
  cfg.validate();
  if (x_out <= cfg.l) throw OutOfRange("arrival_distribution: x_out must lie beyond the barrier");
  if (t_max <= t_min) t_max = 2.0 * (x_out - cfg.x0) / cfg.k0;
  ArrivalTrace tr;
  tr.times.resize(samples);
  tr.density.resize(samples);
  for (int i = 0; i < samples; ++i) {
    tr.times[i] = t_min + (t_max - t_min) * i / (samples - 1.0);
    tr.density[i] = wavepacket(cfg, x_out, tr.times[i]).density();
  }
  auto it = std::max_element(tr.density.begin(), tr.density.end());
  int ipk = int(it - tr.density.begin());
  tr.t_peak = tr.times[ipk];
  if (ipk > 0 && ipk + 1 < samples) {
    // parabolic refinement of the sampled maximum
    const double y0 = tr.density[ipk - 1], y1 = tr.density[ipk], y2 = tr.density[ipk + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (std::abs(denom) > 1e-300) {
      const double dt = tr.times[1] - tr.times[0];
      tr.t_peak += 0.5 * dt * (y0 - y2) / denom;
    }
  }
  return tr;
}

SpinExpectation spin_expectations(const BarrierConfig& cfg, double x_out, double t) {
  const Spinor p = wavepacket(cfg, x_out, t);
  const double n = p.density();
  SpinExpectation s{};
  if (n < 1e-300) return s;
  const Complex cross = p.down * std::conj(p.up);  // <sx> + i <sy> = 2 rho_{du}
  s.sx = 2.0 * cross.real() / n;
  s.sy = 2.0 * cross.imag() / n;
  s.sz = (std::norm(p.up) - std::norm(p.down)) / n;
  return s;
}

ClockComparison clock_comparison(const BarrierConfig& cfg, double x_out) {
  cfg.validate();
  if (cfg.k0 * cfg.k0 <= 2.0 * cfg.b_z)
    throw EvanescentRegime("clock_comparison: requires k0^2 > 2 b_z");
  ClockComparison cc{};
  const double qu = std::sqrt(cfg.k0 * cfg.k0 - 2.0 * cfg.b_z);
  const double qd = std::sqrt(cfg.k0 * cfg.k0 + 2.0 * cfg.b_z);
  cc.t_b = cfg.l / (0.5 * (qu + qd));
  cc.expected_phi = 2.0 * cfg.b_z * cc.t_b;
  const ArrivalTrace tr = arrival_distribution(cfg, x_out);
  const double half = *std::max_element(tr.density.begin(), tr.density.end()) / 2.0;
  cc.measured_phi_min = 1e300;
  cc.measured_phi_max = -1e300;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    if (tr.density[i] < half) continue;
    const SpinExpectation s = spin_expectations(cfg, x_out, tr.times[i]);
    const double phi = std::atan2(s.sy, s.sx);
    cc.measured_phi_min = std::min(cc.measured_phi_min, phi);
    cc.measured_phi_max = std::max(cc.measured_phi_max, phi);
  }
  cc.consistent = cc.expected_phi >= cc.measured_phi_min && cc.expected_phi <= cc.measured_phi_max;
  return cc;
}

}  // namespace spinlab::barrier
