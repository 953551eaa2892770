#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsector/fourier.hpp"
#include "qsector/measure.hpp"

namespace qsector {

/// Find x on S(C^{d+1}) with c_{j, m_j}(x) = 0 for every mass j.
/// Masses may repeat; annihilating m = 1..n of one mass is expressed by listing it n
/// times with exponents 1..n (so d = number of entries = common dimension).
struct SolveProblem {
  std::vector<MassSpec> masses;
  std::vector<int> exponents;
  int q = 2;
  int grid = kDefaultGrid;
  double tol = 1e-6;  // relative to the largest total mass
  int starts = 32;
  std::uint64_t seed = 0;

  void validate() const;
  int dim() const { return masses.empty() ? 0 : masses.front().dim(); }
  double max_total() const;
};

/// H_C(x) = {u : <u,a> + conj(b) = 0}.
struct HyperplaneDesc {
  ComplexVector a;
  Complex b;
  ComplexVector point;          // the point of H_C(x) closest to the origin
  std::optional<Complex> apex;  // d = 1 only
};

struct StartRecord {
  int index = 0;
  Configuration start = Configuration::from_apex(Complex(0.0, 0.0));
  Configuration end = Configuration::from_apex(Complex(0.0, 0.0));
  double initial_residual = 0.0;
  double simplex_residual = 0.0;  // after the derivative-free stage
  double final_residual = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct SolveResult {
  Configuration x = Configuration::from_apex(Complex(0.0, 0.0));
  double residual = 0.0;
  double threshold = 0.0;  // tol * max total mass
  bool converged = false;
  HyperplaneDesc hyperplane;
  ComplexVector coefficients;           // c_{j, m_j}(x)
  std::vector<DeviationReport> per_mass;  // aligned with problem.masses
  std::vector<StartRecord> trace;
  std::vector<Configuration> witnesses;  // distinct converged points of CP^d, best first
};

/// F(x) = (c_{1,m_1}(x), ..., c_{d,m_d}(x)).
ComplexVector test_map(const SolveProblem& p, const Configuration& x);

/// |F(x)|; invariant under x -> lambda x.
double residual(const SolveProblem& p, const Configuration& x);

SolveResult solve(const SolveProblem& p);

/// Throws DegenerateConfiguration on the 0 x S^1 locus.
HyperplaneDesc hyperplane_of(const Configuration& x);

/// For each mass entry, the largest n with {1..n} among the exponents of equal masses.
std::vector<int> annihilated_orders(const SolveProblem& p);

/// Representative of the phase orbit of x whose largest-magnitude coordinate is real positive.
Configuration gauge_fixed(const Configuration& x);

/// 1 - |<x, y>|^2, the squared chordal distance between phase orbits.
double orbit_distance(const Configuration& x, const Configuration& y);

}  // namespace qsector
