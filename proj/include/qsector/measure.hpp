#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

namespace qsector {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Thrown when an operation needs a proper hyperplane but the configuration
/// lies on the 0 x S^1 locus (a = 0).
class DegenerateConfiguration : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Isotropic Gaussian on R^{2d}; each real coordinate has standard deviation sigma.
struct Gaussian {
  ComplexVector mean;
  double sigma = 1.0;
  double weight = 1.0;
  bool operator==(const Gaussian&) const = default;
};

/// Uniform disk in C (only valid for dim = 1).
struct Disk {
  Complex center;
  double radius = 1.0;
  double weight = 1.0;
  bool operator==(const Disk&) const = default;
};

using Component = std::variant<Gaussian, Disk>;

/// An absolutely continuous mass on C^d given as a weighted mixture.
class MassSpec {
 public:
  MassSpec(int dim, std::vector<Component> components);

  int dim() const { return dim_; }
  const std::vector<Component>& components() const { return components_; }
  double total_mass() const { return total_; }
  bool has_disks() const;

  bool operator==(const MassSpec&) const = default;

 private:
  int dim_;
  std::vector<Component> components_;
  double total_;
};

struct PlanarGaussian {
  Complex mean;
  double sigma = 1.0;
  double weight = 1.0;
};

struct PlanarDisk {
  Complex center;
  double radius = 1.0;
  double weight = 1.0;
};

using PlanarComponent = std::variant<PlanarGaussian, PlanarDisk>;

/// A mass on C = R^2. This is the image of a MassSpec under u -> <u,a> + conj(b).
class PlanarMassSpec {
 public:
  explicit PlanarMassSpec(std::vector<PlanarComponent> components);

  const std::vector<PlanarComponent>& components() const { return components_; }
  double total_mass() const { return total_; }
  bool has_disks() const;

  /// The same mass moved by -origin, so that `origin` becomes 0.
  PlanarMassSpec recentered(Complex origin) const;

  /// View as a dim = 1 MassSpec.
  MassSpec as_mass() const;

 private:
  std::vector<PlanarComponent> components_;
  double total_;
};

PlanarMassSpec planar_from_mass(const MassSpec& m);

/// A point x = (a, b) of the unit sphere S(C^{d+1}). Renormalized on construction.
class Configuration {
 public:
  Configuration(ComplexVector a, Complex b);

  /// d = 1 configuration whose hyperplane is the single point `apex`.
  static Configuration from_apex(Complex apex);

  int dim() const { return static_cast<int>(a_.size()); }
  const ComplexVector& a() const { return a_; }
  Complex b() const { return b_; }
  double a_norm() const;
  bool degenerate() const { return a_norm() < kDegenerateThreshold; }

  /// lambda . x for lambda on the unit circle.
  Configuration rotated(double phase) const;

  /// <u, a> + conj(b) with the Hermitian form sum_i u_i conj(a_i).
  Complex affine_form(const ComplexVector& u) const;

  static constexpr double kDegenerateThreshold = 1e-10;

 private:
  ComplexVector a_;
  Complex b_;
};

double total_mass(const MassSpec& m);

/// Exact image of m under u -> <u,a> + conj(b). Throws DegenerateConfiguration on 0 x S^1.
PlanarMassSpec pushforward_planar(const MassSpec& m, const Configuration& x);

/// Mass of the closed wedge {z : |arg(z e^{-i theta})| <= pi/q} (apex 0).
double wedge_measure(const PlanarMassSpec& p, int q, double theta);

/// mu(S_{q,lambda}(x)) with lambda = e^{i theta}; handles degenerate x by the
/// all-or-nothing indicator on I_b.
double sector_measure(const MassSpec& m, const Configuration& x, int q, double theta);

bool sector_contains(const Configuration& x, int q, double theta, const ComplexVector& u);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t hits = 0;
  std::int64_t samples = 0;
};

MonteCarloEstimate monte_carlo_sector_measure(const MassSpec& m, const Configuration& x, int q,
                                              double theta, std::int64_t n, std::uint64_t seed);

/// Principal argument in (-pi, pi].
double principal_arg(Complex z);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double t);

namespace detail {
// Exposed for tests: individual component wedge masses with unit weight.
double gaussian_wedge_probability(Complex mean, double sigma, double half_angle, double theta);
double disk_wedge_fraction(Complex center, double radius, double half_angle, double theta);
// Fraction of a disk with <z, e^{i theta}> <= t (real inner product).
double disk_halfplane_fraction(Complex center, double radius, double direction, double t);
}  // namespace detail

}  // namespace qsector
