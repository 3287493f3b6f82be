#pragma once

#include <random>

#include <Eigen/Dense>

#include "spinopm/commands.hpp"
#include "spinopm/scenario.hpp"

namespace fixtures {

// Random full-rank density matrix, fixed seed for reproducibility.
inline Eigen::MatrixXcd random_density(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = {normal(rng), normal(rng)};
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace();
}

inline nlohmann::json reference_document() { return spinopm::default_config_document(); }

inline spinopm::RunConfig reference_config(const nlohmann::json& doc = reference_document()) {
  return spinopm::parse_config(doc, spinopm::ConstantsTable::load());
}

inline spinopm::Scenario reference_scenario() { return spinopm::build_scenario(reference_config()); }

}  // namespace fixtures
