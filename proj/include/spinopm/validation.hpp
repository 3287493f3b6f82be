#pragma once

#include <string>
#include <vector>

#include "spinopm/scenario.hpp"

namespace spinopm {

struct ValidationCheck {
  std::string name;
  double value = 0.0;      // measured discrepancy (or ratio for informational rows)
  double tolerance = 0.0;
  bool passed = false;
  bool informational = false;  // reported, never fails the suite
  std::string detail;
};

struct ValidationOptions {
  bool driven = true;       // nonlinear driven integrations (~1 s)
  bool time_domain = true;  // e^{𝒜τ} + FFT spectrum
};

// Closed forms against the brute-force oracle at the scenario's parameters.
std::vector<ValidationCheck> validation_suite(const Scenario& scenario, const ValidationOptions& options = {});

bool all_passed(const std::vector<ValidationCheck>& checks);

}  // namespace spinopm
