#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qsector/measure.hpp"

namespace qsector::detail {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2Pi = 2.50662827463100050242;

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel kronrod_panel(const F& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  static const auto& x = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kron = wk[0] * fc;
  double gauss = wg[0] * fc;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = half * x[i];
    const double s = f(mid - dx) + f(mid + dx);
    kron += wk[i] * s;
    // Even-index Kronrod abscissae are the Gauss points.
    if (i % 2 == 0) gauss += wg[i / 2] * s;
  }
  kron *= half;
  gauss *= half;
  return {a, b, kron, std::abs(kron - gauss)};
}

// Globally adaptive G7/K15 over consecutive breakpoints.
template <class F>
double integrate_adaptive(const F& f, const std::vector<double>& breaks, double abs_tol, double rel_tol) {
  std::priority_queue<Panel> heap;
  double value = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] <= breaks[i]) continue;
    Panel p = kronrod_panel(f, breaks[i], breaks[i + 1]);
    value += p.value;
    error += p.error;
    heap.push(p);
  }
  constexpr int kMaxPanels = 400;
  int panels = static_cast<int>(heap.size());
  while (!heap.empty() && error > std::max(abs_tol, rel_tol * std::abs(value)) && panels < kMaxPanels) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = kronrod_panel(f, worst.a, mid);
    Panel right = kronrod_panel(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  return value;
}

double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }
double dot(Complex u, Complex v) { return u.real() * v.real() + u.imag() * v.imag(); }

double sector_area(Complex u, Complex v, double r) {
  if (u == Complex(0.0, 0.0) || v == Complex(0.0, 0.0)) return 0.0;
  return 0.5 * r * r * std::atan2(cross(u, v), dot(u, v));
}

// Signed area of (disk of radius r at the origin) intersected with triangle (0, p, q).
double disk_triangle_area(Complex p, Complex q, double r) {
  const Complex d = q - p;
  const double aa = std::norm(d);
  if (aa == 0.0) return 0.0;
  const double bb = 2.0 * dot(p, d);
  const double cc = std::norm(p) - r * r;
  const double disc = bb * bb - 4.0 * aa * cc;
  if (disc <= 0.0) return sector_area(p, q, r);
  const double sq = std::sqrt(disc);
  // Numerically stable roots.
  const double qq = -0.5 * (bb + std::copysign(sq, bb));
  double t1 = qq / aa;
  double t2 = qq != 0.0 ? cc / qq : -t1;
  if (t1 > t2) std::swap(t1, t2);
  if (t2 <= 0.0 || t1 >= 1.0) {
    if (std::norm(p) <= r * r && std::norm(q) <= r * r) return 0.5 * cross(p, q);
    return sector_area(p, q, r);
  }
  const double s1 = std::max(t1, 0.0);
  const double s2 = std::min(t2, 1.0);
  const Complex x1 = p + s1 * d;
  const Complex x2 = p + s2 * d;
  return sector_area(p, x1, r) + 0.5 * cross(x1, x2) + sector_area(x2, q, r);
}

}  // namespace

double gaussian_wedge_probability(Complex mean, double sigma, double half_angle, double theta) {
  // Rotate so the wedge bisector is the positive real axis.
  const Complex m = mean * std::polar(1.0, -theta);
  if (half_angle >= kPi / 2.0 - 1e-15 && half_angle <= kPi / 2.0 + 1e-15) {
    return normal_cdf(m.real() / sigma);
  }
  const double dist = std::abs(m);
  const double base = std::exp(-0.5 * (dist / sigma) * (dist / sigma));

  // Angular density of the ray mass: (1/2pi) exp(-h^2/2s^2) [exp(-x^2/2) + x sqrt(2pi) Phi(x)].
  auto angular_density = [&](double psi) {
    const Complex w = m * std::polar(1.0, -psi);
    const double x = w.real() / sigma;
    const double h = w.imag() / sigma;
    const double tail = x * kSqrt2Pi * normal_cdf(x) * std::exp(-0.5 * h * h);
    return (base + tail) / kTwoPi;
  };

  std::vector<double> breaks{-half_angle, half_angle};
  if (dist > 0.0) {
    const double width = sigma / dist;
    if (width < 0.5) {
      const double center = principal_arg(m);
      static constexpr std::array<double, 11> kOffsets{-40.0, -12.0, -5.0, -2.0, -0.7, 0.0,
                                                       0.7,   2.0,   5.0,  12.0, 40.0};
      for (double k : kOffsets) {
        const double b = center + k * width;
        if (b > -half_angle && b < half_angle) breaks.push_back(b);
      }
      std::sort(breaks.begin(), breaks.end());
    }
  }
  const double value = integrate_adaptive(angular_density, breaks, 1e-11, 1e-10);
  return std::clamp(value, 0.0, 1.0);
}

double disk_halfplane_fraction(Complex center, double radius, double direction, double t) {
  const double proj = dot(center, std::polar(1.0, direction));
  const double d = std::clamp((t - proj) / radius, -1.0, 1.0);
  return (kPi - std::acos(d) + d * std::sqrt(std::max(0.0, 1.0 - d * d))) / kPi;
}

double disk_wedge_fraction(Complex center, double radius, double half_angle, double theta) {
  if (half_angle >= kPi / 2.0 - 1e-15) {
    // Half-plane Re(z e^{-i theta}) >= 0 is the complement of <z, e^{i theta}> <= 0.
    return 1.0 - disk_halfplane_fraction(center, radius, theta, 0.0);
  }
  // Wedge as a triangle large enough to cover the disk, in disk-centred coordinates.
  const Complex apex = -center;
  const double reach = 2.0 * (std::abs(center) + radius) / std::cos(half_angle) + radius;
  const Complex p1 = apex + std::polar(reach, theta - half_angle);
  const Complex p2 = apex + std::polar(reach, theta + half_angle);
  const double area = disk_triangle_area(apex, p1, radius) + disk_triangle_area(p1, p2, radius) +
                      disk_triangle_area(p2, apex, radius);
  return std::clamp(std::abs(area) / (kPi * radius * radius), 0.0, 1.0);
}

}  // namespace qsector::detail
