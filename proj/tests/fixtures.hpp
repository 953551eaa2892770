#pragma once

#include <random>
#include <vector>

#include "qsector/measure.hpp"

namespace fixtures {

using namespace qsector;

inline Complex random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng)};
}

inline MassSpec random_mixture(std::mt19937_64& rng, int dim, int components = 3) {
  std::uniform_real_distribution<double> sigma(0.3, 1.5);
  std::uniform_real_distribution<double> weight(0.2, 2.0);
  std::vector<Component> comps;
  for (int k = 0; k < components; ++k) {
    ComplexVector mean(static_cast<std::size_t>(dim));
    for (auto& z : mean) z = random_complex(rng, 2.0);
    comps.emplace_back(Gaussian{mean, sigma(rng), weight(rng)});
  }
  return MassSpec(dim, std::move(comps));
}

inline MassSpec random_disks(std::mt19937_64& rng, int components = 3) {
  std::uniform_real_distribution<double> radius(0.2, 1.5);
  std::uniform_real_distribution<double> weight(0.2, 2.0);
  std::vector<Component> comps;
  for (int k = 0; k < components; ++k) comps.emplace_back(Disk{random_complex(rng, 2.0), radius(rng), weight(rng)});
  return MassSpec(1, std::move(comps));
}

inline Configuration random_configuration(std::mt19937_64& rng, int dim) {
  ComplexVector a(static_cast<std::size_t>(dim));
  for (auto& z : a) z = random_complex(rng);
  return Configuration(a, random_complex(rng));
}

}  // namespace fixtures
