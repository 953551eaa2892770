#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qsector/measure.hpp"

namespace qsector {

/// Raised when two independent routes to the same quantity disagree beyond tolerance.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Samples of f(theta) = mu(S_{q,e^{i theta}}(x)) on the uniform grid 2 pi k / N and
/// the discrete Fourier coefficients c_m = (1/N) sum_k f_k e^{-2 pi i m k / N}, |m| <= N/2.
/// Haar measure on the circle is normalized to total mass 1, so c_0 is the mean of f.
struct FourierProfile {
  int q = 2;
  Configuration x = Configuration::from_apex(Complex(0.0, 0.0));
  int grid = 0;
  std::vector<double> samples;
  ComplexVector coeffs;  // index m + grid/2
  double total = 0.0;
  bool smooth = true;  // false when the mass has disk components

  Complex coefficient(int m) const;
  double theta(int k) const { return kTwoPi * k / grid; }
  int max_order() const { return grid / 2; }
};

inline constexpr int kDefaultGrid = 256;

/// Samples sector_measure on the N-grid. N must be a power of two >= 8 and
/// N >= 8 * max_order.
FourierProfile profile(const MassSpec& m, const Configuration& x, int q, int grid = kDefaultGrid,
                       int max_order = 0);

/// Doubles the grid from `grid` until spectrum_resolved holds or `max_grid` is reached.
FourierProfile resolved_profile(const MassSpec& m, const Configuration& x, int q, int grid = kDefaultGrid,
                                int max_grid = 16384);

/// Builds a profile from precomputed samples.
FourierProfile profile_from_samples(std::vector<double> samples, int q, double total, Configuration x,
                                    bool smooth);

Complex coefficient(const FourierProfile& p, int m);

/// Exact c_m on the degenerate locus, where f is T times the indicator of an arc of length 2pi/q
/// and sampled coefficients carry an O(1/N) aliasing error.
Complex degenerate_coefficient(const MassSpec& m, const Configuration& x, int q, int m_exp);

/// |c_m(e^{i phase} x) - e^{i m phase} c_m(x)|.
double equivariance_residual(const MassSpec& m, const Configuration& x, int q, int m_exp, double phase,
                             int grid = kDefaultGrid);

struct L2Deviation {
  double direct = 0.0;    // sqrt of the trapezoid mean of (f - total/q)^2
  double spectral = 0.0;  // sqrt of the Parseval sum over the non-constant modes
};

/// Both routes to ||f - total/q||_2; does not check agreement.
L2Deviation l2_deviation_routes(const FourierProfile& p);

/// ||f - total/q||_2 under normalized circle measure. Throws AccuracyError when the
/// direct and Parseval routes differ by more than 1e-6 total^2 in the squared norm.
double l2_deviation(const FourierProfile& p);

double linf_deviation(const FourierProfile& p);

/// True when every |c_m| with N/4 <= m <= N/2 is below 1e-6 total.
bool spectrum_resolved(const FourierProfile& p);

/// (1/2pi) int |f'|: spectral differentiation on resolved profiles, otherwise the
/// variation of the sample sequence.
double total_variation(const FourierProfile& p);

struct AccelerationEstimate {
  double value = 0.0;
  // False for disk-built profiles or when the spectrum is not resolved on the grid.
  bool reliable = true;
};

/// (1/2pi) int |f''| by spectral differentiation.
AccelerationEstimate acceleration(const FourierProfile& p);

/// Spectral derivative of order 1 or 2 at the grid points.
std::vector<double> spectral_derivative(const FourierProfile& p, int order);

/// sum_{m > n, m not in qZ+} m^-2 from the closed form pi^2/6 (1 - 1/q^2) minus the prefix.
double tail_sum(int q, int n);

/// Same sum by direct summation of `terms` terms (small-to-large order).
double tail_sum_direct(int q, int n, std::int64_t terms = 10'000'000);

/// L2 bound as a fraction of total mass once c_{+-1..n} vanish:
/// n = 0 -> sqrt((1 - 1/q^2)/3), n = 1 -> sqrt(1/3 - 2/pi^2 - 1/(3q^2)), n >= 2 -> sqrt(2)/(pi sqrt(n)).
double l2_bound_fraction(int q, int n);

/// Uniform bound 2 A tail_sum(q, n) given the acceleration A.
double linf_bound(double accel, int q, int n);

struct DeviationReport {
  double l2 = 0.0;
  double l2_spectral = 0.0;
  double linf = 0.0;
  double variation = 0.0;
  double acceleration = 0.0;
  bool acceleration_reliable = true;
  int annihilated = 0;  // n such that c_{+-1..n} are annihilated
  double bound_l2 = 0.0;
  double bound_linf = 0.0;
};

DeviationReport deviation_report(const FourierProfile& p, int annihilated);

}  // namespace qsector
