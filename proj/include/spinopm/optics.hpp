#pragma once

#include <map>
#include <string>

#include "spinopm/half_int.hpp"

namespace spinopm {

// Flat "species.key = value" table. Lines starting with '#' are comments.
class ConstantsTable {
 public:
  static ConstantsTable parse(const std::string& text);
  // $SPINOPM_CONSTANTS if set, else the table compiled into the library.
  static ConstantsTable load();
  static ConstantsTable from_file(const std::string& path);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  double number(const std::string& key) const;
  HalfInt spin(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

// "3/2" or "2".
HalfInt parse_half_int(const std::string& text);

struct SpeciesSpec {
  std::string name;
  HalfInt nuclear_spin = half(3);
  double hyperfine_splitting_hz = 0.0;  // ground-state a-b splitting
  double line_frequency_hz = 0.0;
  double f_osc = 0.0;
  HalfInt j_excited = half(1);

  // A_hfs/ħ, with the splitting A_hfs (I + 1/2).
  double hyperfine_omega() const;
};

SpeciesSpec species_from_table(const ConstantsTable& table, const std::string& name);

struct ProbeSpec {
  double detuning_hz = 0.0;        // probe minus line centroid
  double nu_a_hz = 0.0;            // a-manifold transition, relative to the centroid
  double nu_b_hz = 0.0;
  double gamma_hwhm_hz = 0.5e9;
  double f_osc = 0.342;
  double area_m2 = 1e-5;           // A_eff
  double photon_flux = 0.0;        // Φ, photons/s
  double electron_radius = 0.0;    // r_e; 0 selects the CODATA value
  HalfInt j_excited = half(1);
};

// Transition frequencies from the ground manifolds, measured from the
// population-weighted centroid: ν_a = -[b]/(2[I])·Δ_hfs, ν_b = +[a]/(2[I])·Δ_hfs.
ProbeSpec make_probe(const SpeciesSpec& species, double detuning_hz, double gamma_fwhm_hz, double photon_flux,
                     double area_m2);

struct ProbeCouplings {
  double d_a = 0.0;
  double d_b = 0.0;
  double coupling = 0.0;  // G
  double g_a = 0.0;
  double g_b = 0.0;
};

// x/(x² + 1) with x = (ν - ν_α)/Γ.
double detuning_factor(double detuning_hz, double transition_hz, double gamma_hwhm_hz);

// σ0 = c r_e f_osc / Γ_HWHM for a Lorentzian line, Γ in Hz.
double resonant_cross_section(const ProbeSpec& probe);

// G = 4/((2j+1)(2I+1)) σ0/A_eff, g_α = G D_α.
ProbeCouplings probe_couplings(const ProbeSpec& probe, HalfInt nuclear_spin);

}  // namespace spinopm
