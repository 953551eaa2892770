#include "qsector/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "qsector/parallel.hpp"

namespace qsector {

namespace {

// Sphere coordinates w = (a_1, ..., a_d, b).
ComplexVector coords(const Configuration& x) {
  ComplexVector w = x.a();
  w.push_back(x.b());
  return w;
}

Configuration from_coords(const ComplexVector& w) {
  return Configuration(ComplexVector(w.begin(), w.end() - 1), w.back());
}

std::size_t largest_coordinate(const ComplexVector& w) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (std::abs(w[i]) > std::abs(w[best])) best = i;
  return best;
}

// Affine chart of CP^d: the pivot coordinate is fixed to 1, the others are free.
class Chart {
 public:
  explicit Chart(const Configuration& x) {
    const ComplexVector w = coords(x);
    size_ = w.size();
    pivot_ = largest_coordinate(w);
    origin_.reserve(2 * (size_ - 1));
    for (std::size_t i = 0; i < size_; ++i) {
      if (i == pivot_) continue;
      const Complex y = w[i] / w[pivot_];
      origin_.push_back(y.real());
      origin_.push_back(y.imag());
    }
  }

  std::size_t params() const { return origin_.size(); }
  const std::vector<double>& origin() const { return origin_; }

  Configuration point(const std::vector<double>& v) const {
    ComplexVector w(size_);
    std::size_t k = 0;
    for (std::size_t i = 0; i < size_; ++i) {
      if (i == pivot_) {
        w[i] = Complex(1.0, 0.0);
      } else {
        w[i] = Complex(v[2 * k], v[2 * k + 1]);
        ++k;
      }
    }
    return from_coords(w);
  }

  // Chart coordinates grow without bound near the pivot's zero set; re-chart there.
  static bool well_conditioned(const std::vector<double>& v) {
    for (std::size_t i = 0; i + 1 < v.size(); i += 2)
      if (std::hypot(v[i], v[i + 1]) > 2.0) return false;
    return true;
  }

 private:
  std::size_t size_ = 0;
  std::size_t pivot_ = 0;
  std::vector<double> origin_;
};

// Profiles are computed once per distinct mass and shared by its exponents.
class TestMap {
 public:
  explicit TestMap(const SolveProblem& p) : problem_(p) {
    for (std::size_t j = 0; j < p.masses.size(); ++j) {
      std::size_t id = distinct_.size();
      for (std::size_t k = 0; k < distinct_.size(); ++k)
        if (p.masses[distinct_[k]] == p.masses[j]) id = k;
      if (id == distinct_.size()) distinct_.push_back(j);
      slot_.push_back(id);
    }
  }

  ComplexVector operator()(const Configuration& x) const {
    std::vector<FourierProfile> profiles;
    profiles.reserve(distinct_.size());
    for (std::size_t j : distinct_) profiles.push_back(profile(problem_.masses[j], x, problem_.q, problem_.grid));
    ComplexVector out(problem_.masses.size());
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] = profiles[slot_[j]].coefficient(problem_.exponents[j]);
    ++evaluations_;
    return out;
  }

  int evaluations() const { return evaluations_; }

 private:
  const SolveProblem& problem_;
  std::vector<std::size_t> distinct_;
  std::vector<std::size_t> slot_;
  mutable int evaluations_ = 0;
};

double norm_of(const ComplexVector& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

struct MinimizeOutcome {
  std::vector<double> point;
  double value;
};

// Nelder-Mead on f: R^n -> R. Stops at `target`, after `budget` evaluations, or when
// the simplex collapses.
MinimizeOutcome nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                            std::vector<double> start, double step, double target, int budget) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  int used = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    values[i] = f(simplex[i]);
    ++used;
  }
  std::vector<std::size_t> order(n + 1);
  auto blend = [n](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
  };
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];
    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(simplex[i][k] - simplex[best][k]));
    if (values[best] <= target || used >= budget || spread < 1e-10) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);

    const auto reflected = blend(centroid, simplex[worst], -1.0);
    const double fr = f(reflected);
    ++used;
    if (fr < values[best]) {
      const auto expanded = blend(centroid, simplex[worst], -2.0);
      const double fe = f(expanded);
      ++used;
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
    } else if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
    } else {
      const bool outside = fr < values[worst];
      const auto contracted = blend(centroid, outside ? reflected : simplex[worst], 0.5);
      const double fc = f(contracted);
      ++used;
      if (fc < std::min(fr, values[worst])) {
        simplex[worst] = contracted;
        values[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          simplex[i] = blend(simplex[best], simplex[i], 0.5);
          values[i] = f(simplex[i]);
          ++used;
        }
      }
    }
  }
  const std::size_t best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  return {simplex[best], values[best]};
}

Eigen::VectorXd stack(const ComplexVector& c) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(2 * c.size()));
  for (std::size_t j = 0; j < c.size(); ++j) {
    r(static_cast<Eigen::Index>(2 * j)) = c[j].real();
    r(static_cast<Eigen::Index>(2 * j + 1)) = c[j].imag();
  }
  return r;
}

// Levenberg-damped Gauss-Newton on the 2d real residual components in one chart,
// with a central-difference Jacobian.
Configuration gauss_newton(const TestMap& map, const Configuration& start, double target, int max_iterations) {
  Configuration current = start;
  for (int rechart = 0; rechart < 4; ++rechart) {
    const Chart chart(current);
    std::vector<double> v = chart.origin();
    const auto n = static_cast<Eigen::Index>(v.size());
    auto eval = [&](const std::vector<double>& p) { return stack(map(chart.point(p))); };
    Eigen::VectorXd r = eval(v);
    double damping = 1e-6;
    bool left_chart = false;
    for (int it = 0; it < max_iterations && r.norm() > target; ++it) {
      Eigen::MatrixXd jac(r.size(), n);
      constexpr double h = 1e-5;
      for (Eigen::Index k = 0; k < n; ++k) {
        std::vector<double> plus = v, minus = v;
        plus[static_cast<std::size_t>(k)] += h;
        minus[static_cast<std::size_t>(k)] -= h;
        jac.col(k) = (eval(plus) - eval(minus)) / (2.0 * h);
      }
      const Eigen::MatrixXd normal = jac.transpose() * jac;
      const Eigen::VectorXd grad = jac.transpose() * r;
      bool improved = false;
      for (int attempt = 0; attempt < 12; ++attempt) {
        Eigen::MatrixXd lhs = normal;
        for (Eigen::Index k = 0; k < n; ++k) lhs(k, k) += damping * (1.0 + normal(k, k));
        const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
        std::vector<double> trial = v;
        for (Eigen::Index k = 0; k < n; ++k) trial[static_cast<std::size_t>(k)] += step(k);
        const Eigen::VectorXd rt = eval(trial);
        if (rt.norm() < r.norm()) {
          v = std::move(trial);
          r = rt;
          damping = std::max(damping * 0.1, 1e-12);
          improved = true;
          break;
        }
        damping *= 10.0;
      }
      if (!improved) break;
      if (!Chart::well_conditioned(v)) {
        left_chart = true;
        break;
      }
    }
    current = chart.point(v);
    if (!left_chart) break;
  }
  return current;
}

Configuration random_start(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  while (true) {
    ComplexVector a(static_cast<std::size_t>(dim));
    for (auto& z : a) z = Complex(normal(rng), normal(rng));
    const Complex b(normal(rng), normal(rng));
    Configuration x(std::move(a), b);
    // No zero lies near the degenerate locus.
    if (x.a_norm() >= 0.1) return x;
  }
}

bool lexicographically_less(const Configuration& x, const Configuration& y) {
  const ComplexVector u = coords(x), v = coords(y);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].real() != v[i].real()) return u[i].real() < v[i].real();
    if (u[i].imag() != v[i].imag()) return u[i].imag() < v[i].imag();
  }
  return false;
}

}  // namespace

void SolveProblem::validate() const {
  if (masses.empty()) throw std::invalid_argument("solve problem needs at least one mass");
  const int d = masses.front().dim();
  for (const auto& m : masses)
    if (m.dim() != d) throw std::invalid_argument("all masses must live in the same dimension");
  if (static_cast<int>(masses.size()) != d) {
    std::ostringstream os;
    os << "need exactly d = " << d << " masses on C^" << d << " (got " << masses.size() << ")";
    throw std::invalid_argument(os.str());
  }
  if (exponents.size() != masses.size()) throw std::invalid_argument("need one exponent per mass");
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  for (int m : exponents) {
    if (m <= 0) throw std::invalid_argument("exponents must be positive integers");
    if (8 * m >= grid) {
      std::ostringstream os;
      os << "exponent " << m << " needs a grid larger than " << grid;
      throw std::invalid_argument(os.str());
    }
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (starts < 1) throw std::invalid_argument("need at least one start");
  if (grid < 8 || (grid & (grid - 1)) != 0) throw std::invalid_argument("grid size must be a power of two >= 8");
}

double SolveProblem::max_total() const {
  double best = 0.0;
  for (const auto& m : masses) best = std::max(best, m.total_mass());
  return best;
}

ComplexVector test_map(const SolveProblem& p, const Configuration& x) { return TestMap(p)(x); }

double residual(const SolveProblem& p, const Configuration& x) { return norm_of(test_map(p, x)); }

HyperplaneDesc hyperplane_of(const Configuration& x) {
  if (x.degenerate()) throw DegenerateConfiguration("degenerate configuration has no centering hyperplane");
  HyperplaneDesc h;
  h.a = x.a();
  h.b = x.b();
  const double a2 = x.a_norm() * x.a_norm();
  h.point.resize(h.a.size());
  for (std::size_t i = 0; i < h.a.size(); ++i) h.point[i] = -std::conj(h.b) * h.a[i] / a2;
  if (h.a.size() == 1) h.apex = -std::conj(h.b) / std::conj(h.a[0]);
  return h;
}

std::vector<int> annihilated_orders(const SolveProblem& p) {
  std::vector<int> out(p.masses.size(), 0);
  for (std::size_t j = 0; j < p.masses.size(); ++j) {
    std::vector<int> orders;
    for (std::size_t k = 0; k < p.masses.size(); ++k)
      if (p.masses[k] == p.masses[j]) orders.push_back(p.exponents[k]);
    int n = 0;
    while (std::find(orders.begin(), orders.end(), n + 1) != orders.end()) ++n;
    out[j] = n;
  }
  return out;
}

Configuration gauge_fixed(const Configuration& x) {
  ComplexVector w = coords(x);
  const Complex pivot = w[largest_coordinate(w)];
  const Complex phase = std::conj(pivot) / std::abs(pivot);
  for (auto& z : w) z *= phase;
  return from_coords(w);
}

double orbit_distance(const Configuration& x, const Configuration& y) {
  const ComplexVector u = coords(x), v = coords(y);
  if (u.size() != v.size()) throw std::invalid_argument("configurations differ in dimension");
  Complex ip(0.0, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) ip += u[i] * std::conj(v[i]);
  return std::max(0.0, 1.0 - std::norm(ip));
}

SolveResult solve(const SolveProblem& p) {
  p.validate();
  const double threshold = p.tol * p.max_total();
  const int dim = p.dim();
  const auto params = static_cast<int>(2 * dim);

  std::mt19937_64 rng(p.seed);
  std::vector<Configuration> starts;
  starts.reserve(static_cast<std::size_t>(p.starts));
  for (int s = 0; s < p.starts; ++s) starts.push_back(random_start(rng, dim));

  std::vector<StartRecord> records(starts.size());
  parallel_for(starts.size(), [&](std::size_t s) {
    const TestMap map(p);
    StartRecord rec;
    rec.index = static_cast<int>(s);
    rec.start = starts[s];
    const Chart chart(starts[s]);
    rec.initial_residual = norm_of(map(starts[s]));
    auto objective = [&](const std::vector<double>& v) { return norm_of(map(chart.point(v))); };
    const MinimizeOutcome coarse =
        nelder_mead(objective, chart.origin(), 0.2, 1e-3 * p.max_total(), 40 * (params + 1));
    rec.simplex_residual = coarse.value;
    const Configuration refined = gauss_newton(map, chart.point(coarse.point), 1e-3 * threshold, 40);
    rec.end = gauge_fixed(refined);
    rec.final_residual = norm_of(map(rec.end));
    rec.converged = rec.final_residual <= threshold && !rec.end.degenerate();
    rec.evaluations = map.evaluations();
    records[s] = rec;
  });

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (records[a].final_residual != records[b].final_residual)
      return records[a].final_residual < records[b].final_residual;
    return lexicographically_less(records[a].end, records[b].end);
  });

  SolveResult result;
  const StartRecord& best = records[order.front()];
  result.x = best.end;
  result.residual = best.final_residual;
  result.threshold = threshold;
  result.converged = best.converged;
  result.trace = records;
  for (std::size_t idx : order) {
    if (!records[idx].converged) continue;
    const bool seen = std::any_of(result.witnesses.begin(), result.witnesses.end(), [&](const Configuration& w) {
      return orbit_distance(w, records[idx].end) < 1e-8;
    });
    if (!seen) result.witnesses.push_back(records[idx].end);
  }

  const TestMap map(p);
  result.coefficients = map(result.x);
  if (!result.x.degenerate()) result.hyperplane = hyperplane_of(result.x);
  const std::vector<int> orders = annihilated_orders(p);
  for (std::size_t j = 0; j < p.masses.size(); ++j) {
    const FourierProfile prof = profile(p.masses[j], result.x, p.q, p.grid);
    result.per_mass.push_back(deviation_report(prof, result.converged ? orders[j] : 0));
  }
  return result;
}

}  // namespace qsector
