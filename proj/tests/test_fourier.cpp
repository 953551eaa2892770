#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "qsector/fourier.hpp"

using namespace qsector;

namespace {

std::vector<PlanarGaussian> planar_gaussians(const PlanarMassSpec& p) {
  std::vector<PlanarGaussian> out;
  for (const auto& c : p.components()) out.push_back(std::get<PlanarGaussian>(c));
  return out;
}

}  // namespace

TEST_CASE("profile argument checks") {
  const MassSpec m(1, {Gaussian{{Complex(1, 0)}, 1.0, 1.0}});
  const Configuration x = Configuration::from_apex(Complex(0, 0));
  CHECK_THROWS_AS(profile(m, x, 3, 100), std::invalid_argument);
  CHECK_THROWS_AS(profile(m, x, 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(profile(m, x, 3, 64, 16), std::invalid_argument);
  CHECK_THROWS_AS(profile(m, x, 1, 64), std::invalid_argument);
  const FourierProfile p = profile(m, x, 3, 64);
  CHECK_THROWS_AS(p.coefficient(33), std::out_of_range);
}

TEST_CASE("coefficients match the angular density route") {
  std::mt19937_64 rng(101);
  for (int q : {2, 3, 5}) {
    const MassSpec m = fixtures::random_mixture(rng, 2, 3);
    const Configuration x = fixtures::random_configuration(rng, 2);
    const FourierProfile p = profile(m, x, q, 256);
    const auto mix = planar_gaussians(pushforward_planar(m, x));
    for (int k : {0, 1, 2, 3, 4, 7}) {
      const Complex expected = oracle::wedge_coefficient(mix, q, k);
      CHECK(std::abs(p.coefficient(k) - expected) < 1e-9 * m.total_mass());
      CHECK(std::abs(p.coefficient(-k) - std::conj(expected)) < 1e-9 * m.total_mass());
    }
  }
}

TEST_CASE("mean coefficient and multiples of q") {
  std::mt19937_64 rng(7);
  for (int q : {2, 3, 5, 8}) {
    const MassSpec m = fixtures::random_mixture(rng, 1, 4);
    const FourierProfile p = profile(m, fixtures::random_configuration(rng, 1), q);
    CHECK(std::abs(p.coefficient(0) - m.total_mass() / q) < 1e-10 * m.total_mass());
    for (int k = q; k <= 64; k += q) CHECK(std::abs(p.coefficient(k)) < 1e-10 * m.total_mass());
  }
}

TEST_CASE("near-atom coefficients follow the step-function closed form") {
  const double phi = 0.7;
  const MassSpec m(1, {Gaussian{{std::polar(1.0, phi)}, 1e-7, 1.0}});
  const Configuration x = Configuration::from_apex(Complex(0, 0));
  for (int q : {2, 3, 5}) {
    const FourierProfile p = profile(m, x, q, 4096);
    for (int k = 1; k <= 8; ++k) {
      const Complex expected = std::polar(1.0, -k * phi) * std::sin(k * kPi / q) / (k * kPi);
      CHECK(std::abs(p.coefficient(k) - expected) < 1e-3);
    }
  }
  const FourierProfile p = profile(m, x, 2, 4096);
  CHECK(std::abs(p.coefficient(1)) == doctest::Approx(1.0 / kPi).epsilon(1e-3));
  // A step profile has variation 2 * total / (2 pi) after dividing by 2 pi.
  CHECK(total_variation(p) == doctest::Approx(1.0 / kPi).epsilon(1e-6));
  CHECK_FALSE(acceleration(p).reliable);
}

TEST_CASE("Parseval routes agree") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const MassSpec m = trial % 3 == 0 ? fixtures::random_disks(rng) : fixtures::random_mixture(rng, 1);
    const FourierProfile p = profile(m, fixtures::random_configuration(rng, 1), 2 + trial % 4);
    const L2Deviation r = l2_deviation_routes(p);
    const double t2 = m.total_mass() * m.total_mass();
    CHECK(std::abs(r.direct * r.direct - r.spectral * r.spectral) <= 1e-6 * t2);
    CHECK(l2_deviation(p) == doctest::Approx(r.direct));
  }
}

TEST_CASE("coefficients are bounded by variation and acceleration") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 12; ++trial) {
    const int q = 2 + trial % 4;
    const MassSpec m = fixtures::random_mixture(rng, 1 + trial % 2);
    const FourierProfile p = profile(m, fixtures::random_configuration(rng, m.dim()), q);
    const double T = m.total_mass();
    const double V = total_variation(p);
    const AccelerationEstimate A = acceleration(p);
    CHECK(A.reliable);
    CHECK(V <= T / kPi + 1e-3 * T);
    for (int k = 1; k <= 32; ++k) {
      CHECK(std::abs(p.coefficient(k)) <= V / k + 1e-4 * T);
      CHECK(std::abs(p.coefficient(k)) <= A.value / (k * k) + 1e-4 * T);
    }
    CHECK(linf_deviation(p) <= linf_bound(A.value, q, 0) + 1e-9);
  }
}

TEST_CASE("spectral derivative matches finite differences") {
  std::mt19937_64 rng(59);
  const MassSpec m = fixtures::random_mixture(rng, 1);
  const Configuration x = fixtures::random_configuration(rng, 1);
  const FourierProfile p = profile(m, x, 3, 256);
  const auto d1 = spectral_derivative(p, 1);
  const double h = 1e-5;
  for (int k : {0, 17, 100, 201}) {
    const double t = p.theta(k);
    const double fd = (sector_measure(m, x, 3, t + h) - sector_measure(m, x, 3, t - h)) / (2 * h);
    CHECK(d1[static_cast<std::size_t>(k)] == doctest::Approx(fd).epsilon(1e-5).scale(m.total_mass()));
  }
  CHECK_THROWS_AS(spectral_derivative(p, 3), std::invalid_argument);
}

TEST_CASE("rotationally symmetric mass gives a flat profile") {
  const MassSpec m(1, {Gaussian{{Complex(2, -1)}, 0.8, 3.0}});
  const FourierProfile p = profile(m, Configuration::from_apex(Complex(2, -1)), 5, 64);
  CHECK(linf_deviation(p) < 1e-12);
  CHECK(l2_deviation(p) < 1e-12);
  CHECK(total_variation(p) < 1e-10);
}

TEST_CASE("equivariance under phase rotation") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 6; ++trial) {
    const MassSpec m = fixtures::random_mixture(rng, 2);
    const Configuration x = fixtures::random_configuration(rng, 2);
    CHECK(equivariance_residual(m, x, 3, 1 + trial % 3, 0.37 * trial + 0.1) < 1e-9 * m.total_mass());
  }
}

TEST_CASE("degenerate locus has the indicator spectrum") {
  const MassSpec m(2, {Gaussian{{Complex(1, 0), Complex(0, 1)}, 1.0, 2.5}});
  const Configuration x({Complex(0, 0), Complex(0, 0)}, Complex(0.6, 0.8));
  for (int q : {2, 3, 5}) {
    const FourierProfile p = profile(m, x, q, 4096);
    for (int k = 1; k <= 8; ++k) {
      if (k % q == 0) continue;
      const double expected = 2.5 / kPi * std::abs(std::sin(k * kPi / q)) / k;
      CHECK(std::abs(std::abs(p.coefficient(k)) - expected) < 1e-3 * 2.5);
      CHECK(std::abs(degenerate_coefficient(m, x, q, k)) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("tail sums") {
  CHECK(tail_sum(2, 1) == doctest::Approx(kPi * kPi / 8 - 1).epsilon(1e-14));
  for (int q = 2; q <= 10; ++q) {
    const double qq = static_cast<double>(q) * q;
    CHECK(tail_sum(q, 0) == doctest::Approx((qq - 1) * kPi * kPi / (6 * qq)).epsilon(1e-14));
    CHECK(tail_sum(q, 1) == doctest::Approx((qq - 1) * kPi * kPi / (6 * qq) - 1).epsilon(1e-14));
  }
  for (int q : {2, 3, 7}) {
    for (int n : {0, 1, 4}) {
      const double brute = oracle::sum_inverse_squares(q, n, 2'000'000);
      // Truncation leaves at most 1/2e6.
      CHECK(std::abs(tail_sum(q, n) - brute) < 6e-7);
      CHECK(std::abs(tail_sum_direct(q, n, 2'000'000) - brute) < 1e-12);
    }
  }
  CHECK_THROWS(tail_sum(1, 1));
  CHECK_THROWS(tail_sum(2, -1));
}

TEST_CASE("l2 bound constants") {
  CHECK(l2_bound_fraction(2, 1) == doctest::Approx(0.21762).epsilon(2e-5));
  CHECK(l2_bound_fraction(3, 1) == doctest::Approx(0.30603).epsilon(2e-5));
  CHECK(l2_bound_fraction(3, 4) == doctest::Approx(std::sqrt(2.0) / (kPi * 2.0)));
  CHECK(l2_bound_fraction(2, 0) == doctest::Approx(0.5));
}

TEST_CASE("deviation report collects the pieces") {
  std::mt19937_64 rng(3);
  const MassSpec m = fixtures::random_mixture(rng, 1);
  const FourierProfile p = profile(m, fixtures::random_configuration(rng, 1), 3);
  const DeviationReport r = deviation_report(p, 1);
  CHECK(r.l2 == doctest::Approx(l2_deviation(p)));
  CHECK(r.linf == doctest::Approx(linf_deviation(p)));
  CHECK(r.bound_l2 == doctest::Approx(l2_bound_fraction(3, 1) * m.total_mass()));
  CHECK(r.bound_linf == doctest::Approx(2 * r.acceleration * tail_sum(3, 1)));
}

TEST_CASE("exact degenerate coefficients agree with fine sampling") {
  const MassSpec m(1, {Gaussian{{Complex(1, 0)}, 1.0, 2.0}});
  const Configuration x({Complex(0, 0)}, std::polar(1.0, 0.9));
  const FourierProfile p = profile(m, x, 3, 1 << 14);
  for (int k = 0; k <= 6; ++k) CHECK(std::abs(degenerate_coefficient(m, x, 3, k) - p.coefficient(k)) < 1e-3);
  CHECK_THROWS(degenerate_coefficient(m, Configuration::from_apex(Complex(0, 0)), 3, 1));
}
