#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinopm/drift.hpp"
#include "spinopm/operators.hpp"
#include "spinopm/optics.hpp"
#include "spinopm/sensing.hpp"
#include "spinopm/spectra.hpp"

namespace spinopm {

// Every problem found while validating a config, one per entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct SweepAxis {
  std::string name;
  std::string pointer;  // JSON pointer into the config document
  std::vector<double> values;
};

// "name=start:stop[:n]" or "name=v1,v2,...". Names are the aliases listed in
// README (p, B_gauss, detuning_ghz, ...) or a raw JSON pointer.
SweepAxis parse_sweep_axis(const std::string& spec);

// Unit-normalized (SI) configuration.
struct RunConfig {
  SpeciesSpec species;
  double temperature_c = 0.0;     // informational
  double density_m3 = 0.0;        // 0 when N_at was given directly
  double atom_number = 0.0;
  double polarization = 0.0;
  RateSet rates;
  double field_tesla = 0.0;

  ProbeSpec probe;
  double cell_length_m = 0.0;

  DriveSpec drive;
  FrequencyGrid grid;
  LockinSettings lockin;          // time_constant 0 = 10/(2π ν_res)
  LayoutKind layout = LayoutKind::physical;

  std::vector<SweepAxis> sweep;
  nlohmann::json document;        // as read, for sweep substitution
};

RunConfig parse_config(const nlohmann::json& document, const ConstantsTable& constants);
RunConfig load_config(const std::string& path, const ConstantsTable& constants);

// Copy of the document with `pointer` set to `value`. Setting polarization
// drops an explicit pumping rate and vice versa, keeping them exclusive.
nlohmann::json substitute(const nlohmann::json& document, const std::string& pointer, double value);

}  // namespace spinopm
