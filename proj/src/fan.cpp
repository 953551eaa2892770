#include "qsector/fan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qsector/parallel.hpp"

namespace qsector {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double project(Complex u, double direction) {
  return u.real() * std::cos(direction) + u.imag() * std::sin(direction);
}

// Intersection of two non-parallel lines.
Complex intersect(const Line& l1, const Line& l2) {
  const double a11 = std::cos(l1.direction), a12 = std::sin(l1.direction);
  const double a21 = std::cos(l2.direction), a22 = std::sin(l2.direction);
  const double det = a11 * a22 - a12 * a21;
  return {(l1.offset * a22 - a12 * l2.offset) / det, (a11 * l2.offset - l1.offset * a21) / det};
}

std::array<Line, 3> fan_lines(const PlanarMassSpec& p, double base) {
  std::array<Line, 3> lines{};
  for (int k = 0; k < 3; ++k) {
    const double dir = base + k * kPi / 3.0;
    lines[static_cast<std::size_t>(k)] = {dir, bisecting_line(p, dir)};
  }
  return lines;
}

}  // namespace

void AdversarialSpec::validate() const {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(r > 2.0)) throw std::invalid_argument("r must exceed 2");
  if (!(delta > 0.0) || !(delta < 1.0 / (2.0 * n)))
    throw std::invalid_argument("delta must lie in (0, 1/(2n)) for disjoint disks");
}

double halfplane_measure(const PlanarMassSpec& p, double direction, double t) {
  double total = 0.0;
  for (const auto& c : p.components()) {
    total += std::visit(overloaded{
                            [&](const PlanarGaussian& g) {
                              const double z = (t - project(g.mean, direction)) / g.sigma;
                              return g.weight * 0.5 * std::erfc(-z / std::sqrt(2.0));
                            },
                            [&](const PlanarDisk& d) {
                              return d.weight * detail::disk_halfplane_fraction(d.center, d.radius, direction, t);
                            },
                        },
                        c);
  }
  return total;
}

double bisecting_line(const PlanarMassSpec& p, double direction) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : p.components()) {
    std::visit(overloaded{
                   [&](const PlanarGaussian& g) {
                     const double s = project(g.mean, direction);
                     lo = std::min(lo, s - 40.0 * g.sigma);
                     hi = std::max(hi, s + 40.0 * g.sigma);
                   },
                   [&](const PlanarDisk& d) {
                     const double s = project(d.center, direction);
                     lo = std::min(lo, s - d.radius);
                     hi = std::max(hi, s + d.radius);
                   },
               },
               c);
  }
  const double half = 0.5 * p.total_mass();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (halfplane_measure(p, direction, mid) < half)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double six_fan_scan_function(const PlanarMassSpec& p, double base_angle) {
  const auto lines = fan_lines(p, base_angle);
  const Complex p1 = intersect(lines[1], lines[2]);
  return project(p1, lines[0].direction) - lines[0].offset;
}

SixFan regular_six_fan(const PlanarMassSpec& p, int scan_points) {
  if (scan_points < 2) throw std::invalid_argument("need at least two scan points");
  SixFan fan;
  fan.scan_angles.resize(static_cast<std::size_t>(scan_points) + 1);
  fan.scan_values.resize(fan.scan_angles.size());
  parallel_for(fan.scan_angles.size(), [&](std::size_t i) {
    fan.scan_angles[i] = kPi * static_cast<double>(i) / scan_points;
    fan.scan_values[i] = six_fan_scan_function(p, fan.scan_angles[i]);
  });

  std::size_t bracket = fan.scan_angles.size();
  for (std::size_t i = 0; i + 1 < fan.scan_angles.size(); ++i) {
    if (fan.scan_values[i] == 0.0 || fan.scan_values[i] * fan.scan_values[i + 1] < 0.0) {
      bracket = i;
      break;
    }
  }
  if (bracket == fan.scan_angles.size()) {
    std::ostringstream os;
    os << "six-fan scan found no sign change over " << scan_points << " directions";
    throw std::runtime_error(os.str());
  }

  double lo = fan.scan_angles[bracket];
  double hi = fan.scan_angles[bracket + 1];
  double flo = fan.scan_values[bracket];
  if (flo != 0.0) {
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      const double fm = six_fan_scan_function(p, mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
  } else {
    hi = lo;
  }
  fan.base_angle = 0.5 * (lo + hi);
  fan.lines = fan_lines(p, fan.base_angle);
  fan.center = intersect(fan.lines[1], fan.lines[2]);

  double scale = 0.0;
  for (double v : fan.scan_values) scale = std::max(scale, std::abs(v));
  const double half = 0.5 * p.total_mass();
  for (std::size_t k = 0; k < 3; ++k) {
    fan.bisection_errors[k] = std::abs(halfplane_measure(p, fan.lines[k].direction, fan.lines[k].offset) - half);
    fan.center_offsets[k] = std::abs(project(fan.center, fan.lines[k].direction) - fan.lines[k].offset);
  }
  fan.discontinuous = fan.center_offsets[0] > 1e-6 * std::max(scale, 1.0);
  return fan;
}

double epsilon_infinity(int q) {
  if (q < 3) throw std::invalid_argument("epsilon_infinity formula needs q >= 3");
  return std::max(1.0 / q, (q - 2.0) / (2.0 * q));
}

double adversarial_lower_bound(int q, int n) {
  if (q < 3 || n < 1) throw std::invalid_argument("need q >= 3 and n >= 1");
  return std::max(1.0 / q - 1.0 / (2.0 * n * q), (q - 2.0) / (2.0 * q));
}

CertificateReport centerpoint_certificate(const PlanarMassSpec& p, int q, int grid) {
  if (q < 3) throw std::invalid_argument("certificate needs q >= 3");
  if (grid < 8) throw std::invalid_argument("grid must have at least 8 points");
  CertificateReport rep;
  rep.q = q;
  rep.fan = regular_six_fan(p);
  rep.bound = epsilon_infinity(q) * p.total_mass();
  const PlanarMassSpec centred = p.recentered(rep.fan.center);
  rep.thetas.resize(static_cast<std::size_t>(grid));
  rep.values.resize(rep.thetas.size());
  parallel_for(rep.thetas.size(), [&](std::size_t k) {
    rep.thetas[k] = kTwoPi * static_cast<double>(k) / grid;
    rep.values[k] = wedge_measure(centred, q, rep.thetas[k]);
  });
  const double mean = p.total_mass() / q;
  for (std::size_t k = 0; k < rep.values.size(); ++k) {
    const double dev = std::abs(rep.values[k] - mean);
    if (dev > rep.linf) {
      rep.linf = dev;
      rep.worst_theta = rep.thetas[k];
    }
    rep.max_sector = std::max(rep.max_sector, rep.values[k]);
  }
  rep.pass = rep.linf <= rep.bound + 1e-6;
  return rep;
}

PlanarMassSpec adversarial_mass(const AdversarialSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  const double slot = 1.0 / spec.n;
  // Each center stays in its own slot of width 1/n, so disks of radius delta < 1/(2n) are disjoint.
  const double wiggle = 0.25 * (slot - 2.0 * spec.delta);
  const double weight = 1.0 / (2.0 * spec.n);
  std::vector<PlanarComponent> disks;
  disks.reserve(static_cast<std::size_t>(2 * spec.n));
  for (int side : {-1, 1}) {
    for (int i = 0; i < spec.n; ++i) {
      const double x = spec.r + (i + 0.5) * slot + wiggle * jitter(rng);
      disks.emplace_back(PlanarDisk{Complex(side * x, 0.0), spec.delta, weight});
    }
  }
  return PlanarMassSpec(std::move(disks));
}

double worst_center_deviation(const PlanarMassSpec& p, int q, Complex center, int grid) {
  if (grid < 1) throw std::invalid_argument("grid must be positive");
  const PlanarMassSpec centred = p.recentered(center);
  const double mean = p.total_mass() / q;
  double worst = 0.0;
  for (int k = 0; k < grid; ++k) worst = std::max(worst, std::abs(wedge_measure(centred, q, kTwoPi * k / grid) - mean));
  return worst;
}

CenterSweep sweep_centers(const PlanarMassSpec& p, int q, double extent, int points, int grid) {
  if (points < 2) throw std::invalid_argument("sweep needs at least two points per axis");
  const std::size_t count = static_cast<std::size_t>(points) * static_cast<std::size_t>(points);
  std::vector<double> deviations(count);
  std::vector<Complex> centers(count);
  parallel_for(count, [&](std::size_t idx) {
    const auto i = static_cast<int>(idx / static_cast<std::size_t>(points));
    const auto j = static_cast<int>(idx % static_cast<std::size_t>(points));
    centers[idx] = Complex(-extent + 2.0 * extent * i / (points - 1), -extent + 2.0 * extent * j / (points - 1));
    deviations[idx] = worst_center_deviation(p, q, centers[idx], grid);
  });
  const auto best = static_cast<std::size_t>(std::min_element(deviations.begin(), deviations.end()) - deviations.begin());
  return {deviations[best], centers[best], static_cast<int>(count)};
}

}  // namespace qsector
