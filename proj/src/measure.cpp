#include "qsector/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace qsector {

namespace {

void require_positive(double v, const char* what, std::size_t index) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "component " << index << ": " << what << " must be positive and finite";
    throw std::invalid_argument(os.str());
  }
}

void require_finite(Complex z, const char* what, std::size_t index) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    std::ostringstream os;
    os << "component " << index << ": " << what << " is not finite";
    throw std::invalid_argument(os.str());
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double principal_arg(Complex z) {
  double t = std::arg(z);
  return t == -kPi ? kPi : t;
}

double wrap_angle(double t) {
  double r = std::remainder(t, kTwoPi);
  return r <= -kPi ? r + kTwoPi : r;
}

MassSpec::MassSpec(int dim, std::vector<Component> components)
    : dim_(dim), components_(std::move(components)), total_(0.0) {
  if (dim_ < 1) throw std::invalid_argument("mass dim must be a positive integer");
  if (components_.empty()) throw std::invalid_argument("mass must have at least one component");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    std::visit(overloaded{
                   [&](const Gaussian& g) {
                     if (static_cast<int>(g.mean.size()) != dim_) {
                       std::ostringstream os;
                       os << "component " << i << ": gaussian mean has " << g.mean.size()
                          << " coordinates, expected " << dim_;
                       throw std::invalid_argument(os.str());
                     }
                     for (const auto& z : g.mean) require_finite(z, "mean", i);
                     require_positive(g.sigma, "sigma", i);
                     require_positive(g.weight, "weight", i);
                     total_ += g.weight;
                   },
                   [&](const Disk& d) {
                     if (dim_ != 1) {
                       std::ostringstream os;
                       os << "component " << i << ": disk components require dim = 1";
                       throw std::invalid_argument(os.str());
                     }
                     require_finite(d.center, "center", i);
                     require_positive(d.radius, "radius", i);
                     require_positive(d.weight, "weight", i);
                     total_ += d.weight;
                   },
               },
               components_[i]);
  }
}

bool MassSpec::has_disks() const {
  return std::any_of(components_.begin(), components_.end(),
                     [](const Component& c) { return std::holds_alternative<Disk>(c); });
}

PlanarMassSpec::PlanarMassSpec(std::vector<PlanarComponent> components)
    : components_(std::move(components)), total_(0.0) {
  if (components_.empty()) throw std::invalid_argument("planar mass must have at least one component");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    std::visit(overloaded{
                   [&](const PlanarGaussian& g) {
                     require_finite(g.mean, "mean", i);
                     require_positive(g.sigma, "sigma", i);
                     require_positive(g.weight, "weight", i);
                     total_ += g.weight;
                   },
                   [&](const PlanarDisk& d) {
                     require_finite(d.center, "center", i);
                     require_positive(d.radius, "radius", i);
                     require_positive(d.weight, "weight", i);
                     total_ += d.weight;
                   },
               },
               components_[i]);
  }
}

bool PlanarMassSpec::has_disks() const {
  return std::any_of(components_.begin(), components_.end(),
                     [](const PlanarComponent& c) { return std::holds_alternative<PlanarDisk>(c); });
}

PlanarMassSpec PlanarMassSpec::recentered(Complex origin) const {
  std::vector<PlanarComponent> out;
  out.reserve(components_.size());
  for (const auto& c : components_) {
    std::visit(overloaded{
                   [&](const PlanarGaussian& g) {
                     out.emplace_back(PlanarGaussian{g.mean - origin, g.sigma, g.weight});
                   },
                   [&](const PlanarDisk& d) {
                     out.emplace_back(PlanarDisk{d.center - origin, d.radius, d.weight});
                   },
               },
               c);
  }
  return PlanarMassSpec(std::move(out));
}

MassSpec PlanarMassSpec::as_mass() const {
  std::vector<Component> out;
  out.reserve(components_.size());
  for (const auto& c : components_) {
    std::visit(overloaded{
                   [&](const PlanarGaussian& g) {
                     out.emplace_back(Gaussian{{g.mean}, g.sigma, g.weight});
                   },
                   [&](const PlanarDisk& d) { out.emplace_back(Disk{d.center, d.radius, d.weight}); },
               },
               c);
  }
  return MassSpec(1, std::move(out));
}

PlanarMassSpec planar_from_mass(const MassSpec& m) {
  if (m.dim() != 1) throw std::invalid_argument("planar view requires a dim = 1 mass");
  return pushforward_planar(m, Configuration({Complex(1.0, 0.0)}, Complex(0.0, 0.0)));
}

Configuration::Configuration(ComplexVector a, Complex b) : a_(std::move(a)), b_(b) {
  if (a_.empty()) throw std::invalid_argument("configuration needs at least one a-coordinate");
  double norm2 = std::norm(b_);
  for (const auto& z : a_) norm2 += std::norm(z);
  if (!(norm2 > 0.0) || !std::isfinite(norm2))
    throw std::invalid_argument("configuration must be a nonzero finite vector");
  const double s = 1.0 / std::sqrt(norm2);
  for (auto& z : a_) z *= s;
  b_ *= s;
}

Configuration Configuration::from_apex(Complex apex) {
  // u conj(a) + conj(b) = 0 at u = apex with a = 1.
  return Configuration({Complex(1.0, 0.0)}, -std::conj(apex));
}

double Configuration::a_norm() const {
  double s = 0.0;
  for (const auto& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

Configuration Configuration::rotated(double phase) const {
  const Complex lambda = std::polar(1.0, phase);
  ComplexVector a = a_;
  for (auto& z : a) z *= lambda;
  return Configuration(std::move(a), b_ * lambda);
}

Complex Configuration::affine_form(const ComplexVector& u) const {
  if (u.size() != a_.size()) throw std::invalid_argument("point dimension does not match configuration");
  Complex z = std::conj(b_);
  for (std::size_t i = 0; i < u.size(); ++i) z += u[i] * std::conj(a_[i]);
  return z;
}

double total_mass(const MassSpec& m) { return m.total_mass(); }

PlanarMassSpec pushforward_planar(const MassSpec& m, const Configuration& x) {
  if (x.dim() != m.dim()) throw std::invalid_argument("configuration and mass dimensions differ");
  if (x.degenerate())
    throw DegenerateConfiguration("configuration lies on the degenerate locus a = 0");
  const double scale = x.a_norm();
  std::vector<PlanarComponent> out;
  out.reserve(m.components().size());
  for (const auto& c : m.components()) {
    std::visit(overloaded{
                   [&](const Gaussian& g) {
                     out.emplace_back(PlanarGaussian{x.affine_form(g.mean), g.sigma * scale, g.weight});
                   },
                   [&](const Disk& d) {
                     out.emplace_back(PlanarDisk{x.affine_form({d.center}), d.radius * scale, d.weight});
                   },
               },
               c);
  }
  return PlanarMassSpec(std::move(out));
}

double wedge_measure(const PlanarMassSpec& p, int q, double theta) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  const double half_angle = kPi / q;
  double total = 0.0;
  for (const auto& c : p.components()) {
    total += std::visit(
        overloaded{
            [&](const PlanarGaussian& g) {
              return g.weight * detail::gaussian_wedge_probability(g.mean, g.sigma, half_angle, theta);
            },
            [&](const PlanarDisk& d) {
              return d.weight * detail::disk_wedge_fraction(d.center, d.radius, half_angle, theta);
            },
        },
        c);
  }
  return std::clamp(total, 0.0, p.total_mass());
}

double sector_measure(const MassSpec& m, const Configuration& x, int q, double theta) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (x.degenerate()) {
    // v = conj(b) e^{-i theta}; the sector is everything or nothing.
    const double offset = wrap_angle(theta + principal_arg(x.b()));
    return std::abs(offset) <= kPi / q ? m.total_mass() : 0.0;
  }
  return wedge_measure(pushforward_planar(m, x), q, theta);
}

bool sector_contains(const Configuration& x, int q, double theta, const ComplexVector& u) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  const Complex v = x.affine_form(u) * std::polar(1.0, -theta);
  if (v == Complex(0.0, 0.0)) return true;
  return std::abs(principal_arg(v)) <= kPi / q;
}

MonteCarloEstimate monte_carlo_sector_measure(const MassSpec& m, const Configuration& x, int q,
                                              double theta, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample count must be at least 1");
  if (x.dim() != m.dim()) throw std::invalid_argument("configuration and mass dimensions differ");
  std::mt19937_64 rng(seed);
  std::vector<double> weights;
  for (const auto& c : m.components())
    weights.push_back(std::visit([](const auto& comp) { return comp.weight; }, c));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  ComplexVector u(static_cast<std::size_t>(m.dim()));
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& comp = m.components()[pick(rng)];
    if (const auto* g = std::get_if<Gaussian>(&comp)) {
      for (std::size_t k = 0; k < u.size(); ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        u[k] = g->mean[k] + g->sigma * Complex(re, im);
      }
    } else {
      const auto& d = std::get<Disk>(comp);
      const double r = d.radius * std::sqrt(uniform(rng));
      const double phi = kTwoPi * uniform(rng);
      u[0] = d.center + std::polar(r, phi);
    }
    if (sector_contains(x, q, theta, u)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const double total = m.total_mass();
  MonteCarloEstimate est;
  est.value = total * p;
  est.std_error = total * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
  est.hits = hits;
  est.samples = n;
  return est;
}

}  // namespace qsector
