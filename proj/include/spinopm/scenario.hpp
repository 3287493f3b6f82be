#pragma once

#include <stdexcept>
#include <string>

#include "spinopm/angular.hpp"
#include "spinopm/config.hpp"
#include "spinopm/drift.hpp"
#include "spinopm/equilibrium.hpp"
#include "spinopm/operators.hpp"
#include "spinopm/optics.hpp"
#include "spinopm/sensing.hpp"
#include "spinopm/spectra.hpp"

namespace spinopm {

// Drift matrix with an eigenvalue in the closed right half plane.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, Eigen::VectorXcd eigenvalues)
      : std::runtime_error(what), eigenvalues_(std::move(eigenvalues)) {}
  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }

 private:
  Eigen::VectorXcd eigenvalues_;
};

// Everything derived from a RunConfig that the commands share.
struct Scenario {
  RunConfig config;
  SpinTempState state;
  CouplingCoeffs coeffs;
  MultipoleLayout layout;
  CartesianProjection projection;
  DriftSystem system;
  CovarianceBlock covariance;
  ProbeCouplings couplings;

  double time_constant() const;  // configured T_bw, else 10/(2π ν_res)
  std::vector<double> frequencies() const { return frequency_grid(system, config.grid); }
};

// Throws InstabilityError when the drift matrix is not Hurwitz.
Scenario build_scenario(const RunConfig& config);

}  // namespace spinopm
