#include "spinopm/scenario.hpp"

#include <sstream>

namespace spinopm {

double Scenario::time_constant() const {
  if (config.lockin.time_constant > 0.0) return config.lockin.time_constant;
  return 10.0 / (2 * constants::kPi * system.resonance_hz());
}

Scenario build_scenario(const RunConfig& config) {
  const HalfInt I = config.species.nuclear_spin;
  auto [layout, projection] = layout_and_projection(I, 1, config.layout);
  SpinTempState state = solve_beta(config.polarization, I);
  CouplingCoeffs coeffs = ht_coefficients(I);
  DriftSystem system = assemble_system(state, coeffs, layout, config.rates, config.field_tesla);
  if (!system.stable) {
    std::ostringstream msg;
    msg << "drift matrix is unstable; eigenvalues (s^-1):";
    for (Eigen::Index k = 0; k < system.eigenvalues.size(); ++k)
      msg << "\n  " << system.eigenvalues(k).real() << (system.eigenvalues(k).imag() < 0 ? " - " : " + ")
          << std::abs(system.eigenvalues(k).imag()) << "i";
    throw InstabilityError(msg.str(), system.eigenvalues);
  }
  CovarianceBlock covariance = equal_time_covariance(state, layout);
  ProbeCouplings couplings = probe_couplings(config.probe, I);
  return Scenario{config,          std::move(state),  std::move(coeffs),     std::move(layout),
                  std::move(projection), std::move(system), std::move(covariance), couplings};
}

}  // namespace spinopm
