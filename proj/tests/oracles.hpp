#pragma once

// Reference computations that share no code with the library.

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/owens_t.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qsector/measure.hpp"

namespace oracle {

using qsector::Complex;
using qsector::kPi;

inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// P(X <= h, Y <= k) for a standard bivariate normal with correlation rho, via Owen's T.
inline double bivariate_normal_cdf(double h, double k, double rho) {
  const double s = std::sqrt(1.0 - rho * rho);
  auto t = [&](double a, double b) {
    if (a == 0.0) return (b > 0.0 ? 0.25 : (b < 0.0 ? -0.25 : 0.0));
    return boost::math::owens_t(a, (b - rho * a) / (a * s));
  };
  const double beta = (h * k > 0.0 || (h * k == 0.0 && h + k >= 0.0)) ? 0.0 : 0.5;
  return 0.5 * Phi(h) + 0.5 * Phi(k) - t(h, k) - t(k, h) - beta;
}

// Probability that N(mean, sigma^2 I_2) lands in {z : |arg(z e^{-i theta})| <= alpha}, alpha < pi/2.
inline double gaussian_wedge(Complex mean, double sigma, double alpha, double theta) {
  const Complex m = mean * std::polar(1.0, -theta) / sigma;
  const double mu1 = std::sin(alpha) * m.real() + std::cos(alpha) * m.imag();
  const double mu2 = std::sin(alpha) * m.real() - std::cos(alpha) * m.imag();
  return bivariate_normal_cdf(mu1, mu2, -std::cos(2.0 * alpha));
}

// Density of arg z for z ~ N(mean, sigma^2 I_2), per radian.
inline double angular_density(Complex mean, double sigma, double psi) {
  const Complex r = mean * std::polar(1.0, -psi);
  const double x = r.real() / sigma;
  const double h = r.imag() / sigma;
  return std::exp(-0.5 * h * h) / (2.0 * kPi) *
         (std::exp(-0.5 * x * x) + x * std::sqrt(2.0 * kPi) * Phi(x));
}

// m-th Fourier coefficient of the wedge profile of a planar Gaussian mixture, computed from the
// angular density: c_m = 2 sin(m pi/q)/m * (1/2pi) int g(psi) e^{-i m psi} dpsi.
inline Complex wedge_coefficient(const std::vector<qsector::PlanarGaussian>& mix, int q, int m,
                                 int nodes = 8192) {
  Complex ghat = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double psi = 2.0 * kPi * k / nodes;
    double g = 0.0;
    for (const auto& c : mix) g += c.weight * angular_density(c.mean, c.sigma, psi);
    ghat += g * std::polar(1.0, -m * psi);
  }
  ghat *= 2.0 * kPi / nodes;
  if (m == 0) return ghat / static_cast<double>(q);
  return ghat * std::sin(m * kPi / q) / (kPi * m);
}

// Fraction of the disk |z - c| <= R inside {|arg(z e^{-i theta})| <= alpha} by polar quadrature.
inline double disk_wedge(Complex c, double R, double alpha, double theta) {
  auto radial = [&](double psi) {
    const double p = (c * std::polar(1.0, -psi)).real();
    const double disc = p * p - (std::norm(c) - R * R);
    if (disc <= 0.0) return 0.0;
    const double r2 = p + std::sqrt(disc);
    const double r1 = std::max(0.0, p - std::sqrt(disc));
    if (r2 <= 0.0) return 0.0;
    return 0.5 * (r2 * r2 - r1 * r1);
  };
  // Split at the tangent directions, where the radial integrand has square-root kinks.
  std::vector<double> cuts{theta - alpha, theta + alpha};
  const double d = std::abs(c);
  if (d > R) {
    const double half = std::asin(R / d);
    for (int k = -2; k <= 2; ++k)
      for (double a : {std::arg(c) - half, std::arg(c) + half}) {
        const double t = a + 2.0 * kPi * k;
        if (t > theta - alpha && t < theta + alpha) cuts.push_back(t);
      }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(radial, cuts[i], cuts[i + 1], 15, 1e-13);
  return total / (kPi * R * R);
}

inline double sum_inverse_squares(int q, int n, long long terms) {
  long double s = 0.0L;
  for (long long m = terms; m > n; --m)
    if (m % q != 0) s += 1.0L / (static_cast<long double>(m) * m);
  return static_cast<double>(s);
}

}  // namespace oracle
