#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qsector/fourier.hpp"
#include "qsector/measure.hpp"

namespace qsector {

/// The line {u : <u, e^{i direction}> = offset} for the real inner product on C = R^2.
struct Line {
  double direction = 0.0;
  double offset = 0.0;
};

/// Three lines at directions base, base + pi/3, base + 2pi/3 through one center,
/// each bisecting the mass.
struct SixFan {
  Complex center;
  double base_angle = 0.0;
  std::array<Line, 3> lines{};
  std::array<double, 3> bisection_errors{};  // |mu(half-plane) - total/2|
  std::array<double, 3> center_offsets{};    // distance from center to each line
  bool discontinuous = false;                // sign change without a root (scan jump)
  std::vector<double> scan_angles;
  std::vector<double> scan_values;
};

struct AdversarialSpec {
  int q = 3;
  int n = 10;
  double r = 100.0;
  double delta = 1e-3;
  void validate() const;
};

struct CertificateReport {
  int q = 3;
  SixFan fan;
  double bound = 0.0;  // max{1/q, (q-2)/2q} * total
  double linf = 0.0;
  double worst_theta = 0.0;
  double max_sector = 0.0;  // never above total/2 at a 6-fan center
  bool pass = false;
  std::vector<double> thetas;
  std::vector<double> values;
};

struct CenterSweep {
  double min_deviation = 0.0;
  Complex argmin;
  int points = 0;
};

/// mu({u : <u, e^{i direction}> <= t}).
double halfplane_measure(const PlanarMassSpec& p, double direction, double t);

/// Offset t with halfplane_measure(p, direction, t) = total/2, by bisection.
double bisecting_line(const PlanarMassSpec& p, double direction);

/// Odd scan function: signed distance of L_1(x) cap L_2(x) from L_0(x) for x = e^{i base}.
double six_fan_scan_function(const PlanarMassSpec& p, double base_angle);

/// Throws std::runtime_error when the scan shows no sign change.
SixFan regular_six_fan(const PlanarMassSpec& p, int scan_points = 720);

/// max{1/q, (q-2)/(2q)}.
double epsilon_infinity(int q);

/// max{1/q - 1/(2nq), (q-2)/(2q)}.
double adversarial_lower_bound(int q, int n);

CertificateReport centerpoint_certificate(const PlanarMassSpec& p, int q, int grid = kDefaultGrid);

/// 2n disjoint disks of radius delta, n in each of [-r-1, -r] and [r, r+1], weight 1/(2n) each.
PlanarMassSpec adversarial_mass(const AdversarialSpec& spec, std::uint64_t seed);

/// max_k |mu(S_{q, e^{i theta_k}}) - total/q| over the grid with apex `center`.
double worst_center_deviation(const PlanarMassSpec& p, int q, Complex center, int grid = kDefaultGrid);

/// Minimum of worst_center_deviation over a points x points grid on [-extent, extent]^2.
CenterSweep sweep_centers(const PlanarMassSpec& p, int q, double extent, int points, int grid = kDefaultGrid);

}  // namespace qsector
