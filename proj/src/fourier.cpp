#include "qsector/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsector/parallel.hpp"

namespace qsector {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_grid(int grid) {
  if (grid < 8 || !is_power_of_two(grid)) {
    std::ostringstream os;
    os << "grid size must be a power of two >= 8 (got " << grid << ")";
    throw std::invalid_argument(os.str());
  }
}

ComplexVector twiddles(int n) {
  ComplexVector w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = std::polar(1.0, -kTwoPi * j / n);
  return w;
}

}  // namespace

Complex FourierProfile::coefficient(int m) const {
  if (std::abs(m) > grid / 2) {
    std::ostringstream os;
    os << "coefficient index " << m << " outside [-" << grid / 2 << ", " << grid / 2 << "]";
    throw std::out_of_range(os.str());
  }
  return coeffs[static_cast<std::size_t>(m + grid / 2)];
}

FourierProfile profile_from_samples(std::vector<double> samples, int q, double total, Configuration x,
                                    bool smooth) {
  const int n = static_cast<int>(samples.size());
  check_grid(n);
  const ComplexVector w = twiddles(n);
  ComplexVector coeffs(static_cast<std::size_t>(n + 1));
  for (int m = -n / 2; m <= n / 2; ++m) {
    Complex acc(0.0, 0.0);
    const int step = ((m % n) + n) % n;
    int idx = 0;
    for (int k = 0; k < n; ++k) {
      acc += samples[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(idx)];
      idx += step;
      if (idx >= n) idx -= n;
    }
    coeffs[static_cast<std::size_t>(m + n / 2)] = acc / static_cast<double>(n);
  }
  // Real input: c_0 and the Nyquist bin are real, c_{-m} = conj(c_m).
  coeffs[static_cast<std::size_t>(n / 2)].imag(0.0);
  for (int m = 1; m < n / 2; ++m) {
    const Complex cm = coeffs[static_cast<std::size_t>(m + n / 2)];
    const Complex cmm = coeffs[static_cast<std::size_t>(n / 2 - m)];
    const Complex sym = 0.5 * (cm + std::conj(cmm));
    coeffs[static_cast<std::size_t>(m + n / 2)] = sym;
    coeffs[static_cast<std::size_t>(n / 2 - m)] = std::conj(sym);
  }
  const double nyquist = coeffs[0].real();
  coeffs[0] = Complex(nyquist, 0.0);
  coeffs[static_cast<std::size_t>(n)] = Complex(nyquist, 0.0);

  FourierProfile p;
  p.q = q;
  p.x = std::move(x);
  p.grid = n;
  p.samples = std::move(samples);
  p.coeffs = std::move(coeffs);
  p.total = total;
  p.smooth = smooth;
  return p;
}

FourierProfile profile(const MassSpec& m, const Configuration& x, int q, int grid, int max_order) {
  check_grid(grid);
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (max_order < 0 || grid < 8 * max_order) {
    std::ostringstream os;
    os << "grid " << grid << " is too small for coefficient order " << max_order << " (need >= 8x)";
    throw std::invalid_argument(os.str());
  }
  std::vector<double> samples(static_cast<std::size_t>(grid));
  const bool degenerate = x.degenerate();
  if (degenerate) {
    for (int k = 0; k < grid; ++k)
      samples[static_cast<std::size_t>(k)] = sector_measure(m, x, q, kTwoPi * k / grid);
  } else {
    const PlanarMassSpec planar = pushforward_planar(m, x);
    parallel_for(samples.size(), [&](std::size_t k) {
      samples[k] = wedge_measure(planar, q, kTwoPi * static_cast<double>(k) / grid);
    });
  }
  return profile_from_samples(std::move(samples), q, m.total_mass(), x, !m.has_disks());
}

FourierProfile resolved_profile(const MassSpec& m, const Configuration& x, int q, int grid, int max_grid) {
  FourierProfile p = profile(m, x, q, grid);
  while (!spectrum_resolved(p) && p.grid < max_grid) p = profile(m, x, q, 2 * p.grid);
  return p;
}

Complex coefficient(const FourierProfile& p, int m) { return p.coefficient(m); }

Complex degenerate_coefficient(const MassSpec& m, const Configuration& x, int q, int m_exp) {
  if (!x.degenerate()) throw std::invalid_argument("configuration is not on the degenerate locus");
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  const double T = m.total_mass();
  if (m_exp == 0) return T / q;
  // The arc is centred at -arg b.
  return T * std::polar(1.0, m_exp * principal_arg(x.b())) * std::sin(m_exp * kPi / q) / (m_exp * kPi);
}

double equivariance_residual(const MassSpec& m, const Configuration& x, int q, int m_exp, double phase,
                             int grid) {
  if (x.degenerate()) throw DegenerateConfiguration("equivariance check needs a non-degenerate configuration");
  if (phase == 0.0) return 0.0;
  const FourierProfile base = profile(m, x, q, grid);
  const FourierProfile turned = profile(m, x.rotated(phase), q, grid);
  const Complex expected = std::polar(1.0, m_exp * phase) * base.coefficient(m_exp);
  return std::abs(turned.coefficient(m_exp) - expected);
}

L2Deviation l2_deviation_routes(const FourierProfile& p) {
  const double mean = p.total / p.q;
  double direct = 0.0;
  for (double f : p.samples) direct += (f - mean) * (f - mean);
  direct /= static_cast<double>(p.grid);

  // Discrete Parseval: the Nyquist bin appears once, the offset of c_0 from total/q is kept.
  const int half = p.grid / 2;
  double spectral = std::norm(p.coefficient(half));
  for (int m = 1; m < half; ++m) spectral += 2.0 * std::norm(p.coefficient(m));
  const double offset = p.coefficient(0).real() - mean;
  spectral += offset * offset;
  return {std::sqrt(direct), std::sqrt(spectral)};
}

double l2_deviation(const FourierProfile& p) {
  const L2Deviation r = l2_deviation_routes(p);
  const double mismatch = std::abs(r.direct * r.direct - r.spectral * r.spectral);
  if (mismatch > 1e-6 * p.total * p.total) {
    std::ostringstream os;
    os << "Parseval mismatch " << mismatch << " exceeds 1e-6 total^2";
    throw AccuracyError(os.str());
  }
  return r.direct;
}

double linf_deviation(const FourierProfile& p) {
  const double mean = p.total / p.q;
  double worst = 0.0;
  for (double f : p.samples) worst = std::max(worst, std::abs(f - mean));
  return worst;
}

std::vector<double> spectral_derivative(const FourierProfile& p, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("spectral derivative order must be 1 or 2");
  const int n = p.grid;
  const int half = n / 2;
  ComplexVector w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = std::polar(1.0, kTwoPi * j / n);
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int m = 1; m < half; ++m) {
      const Complex term = p.coefficient(m) * w[static_cast<std::size_t>((m * k) % n)];
      // Pairing m with -m leaves twice the real part.
      acc += order == 1 ? -2.0 * m * term.imag() : -2.0 * m * m * term.real();
    }
    if (order == 2) acc -= static_cast<double>(half) * half * p.coefficient(half).real() * (k % 2 ? -1.0 : 1.0);
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

bool spectrum_resolved(const FourierProfile& p) {
  double high = 0.0;
  for (int m = p.grid / 4; m <= p.grid / 2; ++m) high = std::max(high, std::abs(p.coefficient(m)));
  return high <= 1e-6 * p.total;
}

double total_variation(const FourierProfile& p) {
  double s = 0.0;
  if (spectrum_resolved(p)) {
    for (double v : spectral_derivative(p, 1)) s += std::abs(v);
    return s / static_cast<double>(p.grid);
  }
  // Under-resolved profiles (near-atoms, disks): spectral derivatives ring, so use
  // the variation of the sampled sequence.
  const std::size_t n = p.samples.size();
  for (std::size_t k = 0; k < n; ++k) s += std::abs(p.samples[(k + 1) % n] - p.samples[k]);
  return s / kTwoPi;
}

AccelerationEstimate acceleration(const FourierProfile& p) {
  const auto d = spectral_derivative(p, 2);
  double s = 0.0;
  for (double v : d) s += std::abs(v);
  AccelerationEstimate est;
  est.value = s / static_cast<double>(p.grid);
  est.reliable = p.smooth && spectrum_resolved(p);
  return est;
}

double tail_sum(int q, int n) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  const double closed = kPi * kPi / 6.0 * (1.0 - 1.0 / (static_cast<double>(q) * q));
  double prefix = 0.0;
  for (int m = 1; m <= n; ++m)
    if (m % q != 0) prefix += 1.0 / (static_cast<double>(m) * m);
  return closed - prefix;
}

double tail_sum_direct(int q, int n, std::int64_t terms) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  double s = 0.0;
  for (std::int64_t m = terms; m > n; --m)
    if (m % q != 0) s += 1.0 / (static_cast<double>(m) * static_cast<double>(m));
  return s;
}

double l2_bound_fraction(int q, int n) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  const double qq = static_cast<double>(q) * q;
  if (n <= 0) return std::sqrt((1.0 - 1.0 / qq) / 3.0);
  if (n == 1) return std::sqrt(1.0 / 3.0 - 2.0 / (kPi * kPi) - 1.0 / (3.0 * qq));
  return std::sqrt(2.0) / (kPi * std::sqrt(static_cast<double>(n)));
}

double linf_bound(double accel, int q, int n) { return 2.0 * accel * tail_sum(q, std::max(n, 0)); }

DeviationReport deviation_report(const FourierProfile& p, int annihilated) {
  DeviationReport r;
  const L2Deviation l2 = l2_deviation_routes(p);
  r.l2 = l2_deviation(p);
  r.l2_spectral = l2.spectral;
  r.linf = linf_deviation(p);
  r.variation = total_variation(p);
  const AccelerationEstimate a = acceleration(p);
  r.acceleration = a.value;
  r.acceleration_reliable = a.reliable;
  r.annihilated = annihilated;
  r.bound_l2 = l2_bound_fraction(p.q, annihilated) * p.total;
  r.bound_linf = linf_bound(a.value, p.q, annihilated);
  return r;
}

}  // namespace qsector
