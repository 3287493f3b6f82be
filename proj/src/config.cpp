#include "spinopm/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "spinopm/constants.hpp"

namespace spinopm {
namespace {

using nlohmann::json;

constexpr double kTeslaPerGauss = 1e-4;
constexpr double kM3PerCm3 = 1e-6;
constexpr double kM2PerCm2 = 1e-4;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += "\n  - " + s;
  return out;
}

// Reads one JSON object, collecting problems instead of throwing, and flags
// keys nobody asked for.
class Section {
 public:
  Section(const json& doc, std::string name, std::vector<std::string>& issues)
      : name_(std::move(name)), issues_(issues) {
    if (doc.contains(name_)) {
      if (doc[name_].is_object())
        node_ = doc[name_];
      else
        issues_.push_back(name_ + ": expected an object");
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) && !node_[key].is_null();
  }

  std::optional<double> number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const json& v = node_[key];
    if (!v.is_number()) {
      issues_.push_back(where(key) + ": expected a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      issues_.push_back(where(key) + ": not finite");
      return std::nullopt;
    }
    return x;
  }

  double number_or(const std::string& key, double fallback) { return number(key).value_or(fallback); }

  std::optional<std::string> text(const std::string& key) {
    if (!has(key)) return std::nullopt;
    if (!node_[key].is_string()) {
      issues_.push_back(where(key) + ": expected a string");
      return std::nullopt;
    }
    return node_[key].get<std::string>();
  }

  void require_positive(const std::string& key, double value) {
    if (!(value > 0.0)) issues_.push_back(where(key) + " must be positive");
  }

  void require_non_negative(const std::string& key, double value) {
    if (!(value >= 0.0)) issues_.push_back(where(key) + " must be non-negative");
  }

  void reject_unknown() {
    for (const auto& item : node_.items())
      if (!seen_.count(item.key())) issues_.push_back(where(item.key()) + ": unknown key");
  }

  std::string where(const std::string& key) const { return name_ + "." + key; }
  const json& node() const { return node_; }

 private:
  std::string name_;
  json node_ = json::object();
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

SpeciesSpec read_species(const json& doc, const ConstantsTable& constants, std::vector<std::string>& issues) {
  SpeciesSpec species;
  if (!doc.contains("species")) {
    issues.push_back("species: missing");
    return species;
  }
  const json& node = doc["species"];
  if (node.is_string()) {
    try {
      return species_from_table(constants, node.get<std::string>());
    } catch (const std::exception& e) {
      issues.push_back(std::string("species: ") + e.what());
      return species;
    }
  }

  // Object form: optional "name" to start from a table entry, explicit
  // fields override it; without a name every field is required.
  Section s(doc, "species", issues);
  const auto name = s.text("name");
  bool from_table = false;
  if (name) {
    try {
      species = species_from_table(constants, *name);
      from_table = true;
    } catch (const std::exception& e) {
      issues.push_back(std::string("species.name: ") + e.what());
    }
  }
  auto spin_field = [&](const std::string& key, HalfInt& target) {
    if (!s.has(key)) {
      if (!from_table) issues.push_back(s.where(key) + ": missing");
      return;
    }
    const json& v = s.node()[key];
    try {
      if (v.is_string())
        target = parse_half_int(v.get<std::string>());
      else if (v.is_number()) {
        const double twice = 2.0 * v.get<double>();
        if (twice != std::round(twice)) throw std::invalid_argument("not a half-integer");
        target = half(static_cast<int>(twice));
      } else {
        throw std::invalid_argument("expected \"3/2\" or a number");
      }
    } catch (const std::exception& e) {
      issues.push_back(s.where(key) + ": " + e.what());
    }
  };
  auto number_field = [&](const std::string& key, double& target) {
    if (const auto v = s.number(key))
      target = *v;
    else if (!from_table && !s.has(key))
      issues.push_back(s.where(key) + ": missing");
  };
  spin_field("nuclear_spin", species.nuclear_spin);
  spin_field("j_excited", species.j_excited);
  number_field("hyperfine_splitting_hz", species.hyperfine_splitting_hz);
  number_field("line_frequency_hz", species.line_frequency_hz);
  number_field("f_osc", species.f_osc);
  if (!name) species.name = "custom";
  s.reject_unknown();

  if (species.nuclear_spin.twice() < 1) issues.push_back("species.nuclear_spin must be at least 1/2");
  if (!(species.hyperfine_splitting_hz > 0.0)) issues.push_back("species.hyperfine_splitting_hz must be positive");
  if (!(species.f_osc > 0.0)) issues.push_back("species.f_osc must be positive");
  return species;
}

LayoutKind read_layout(const std::optional<std::string>& name, std::vector<std::string>& issues) {
  if (!name || *name == "physical") return LayoutKind::physical;
  if (*name == "paired") return LayoutKind::paired;
  issues.push_back("analysis.layout: expected \"physical\" or \"paired\", got \"" + *name + "\"");
  return LayoutKind::physical;
}

const std::map<std::string, std::string>& axis_aliases() {
  static const std::map<std::string, std::string> aliases = {
      {"p", "/ensemble/polarization"},
      {"polarization", "/ensemble/polarization"},
      {"R_op", "/ensemble/optical_pumping_rate"},
      {"R_se", "/ensemble/spin_exchange_rate"},
      {"R_sd", "/ensemble/spin_destruction_rate"},
      {"B_gauss", "/ensemble/field_gauss"},
      {"field_gauss", "/ensemble/field_gauss"},
      {"density_cm3", "/ensemble/density_cm3"},
      {"atom_number", "/ensemble/atom_number"},
      {"detuning_ghz", "/probe/detuning_ghz"},
      {"fwhm_ghz", "/probe/linewidth_fwhm_ghz"},
      {"photon_flux", "/probe/photon_flux"},
      {"b_angle", "/drive/b_angle"},
      {"phi", "/drive/phi"},
      {"record_time_s", "/analysis/record_time_s"},
  };
  return aliases;
}

double parse_number(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument(context + ": not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error("invalid configuration:" + join(issues)), issues_(std::move(issues)) {}

SweepAxis parse_sweep_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
    throw std::invalid_argument("sweep axis '" + spec + "': expected name=start:stop[:n] or name=v1,v2,...");
  SweepAxis axis;
  axis.name = spec.substr(0, eq);
  const std::string range = spec.substr(eq + 1);
  if (axis.name.front() == '/') {
    axis.pointer = axis.name;
  } else {
    const auto it = axis_aliases().find(axis.name);
    if (it == axis_aliases().end()) throw std::invalid_argument("sweep axis '" + axis.name + "': unknown name");
    axis.pointer = it->second;
  }

  if (range.find(':') != std::string::npos) {
    const auto parts = split(range, ':');
    if (parts.size() < 2 || parts.size() > 3)
      throw std::invalid_argument("sweep axis '" + axis.name + "': expected start:stop[:n]");
    const double start = parse_number(parts[0], axis.name);
    const double stop = parse_number(parts[1], axis.name);
    int count = 10;
    if (parts.size() == 3) {
      const double n = parse_number(parts[2], axis.name);
      if (n < 1 || n != std::floor(n)) throw std::invalid_argument("sweep axis '" + axis.name + "': n must be >= 1");
      count = static_cast<int>(n);
    }
    if (count == 1) {
      axis.values = {start};
    } else {
      for (int k = 0; k < count; ++k) axis.values.push_back(start + (stop - start) * k / (count - 1));
    }
  } else {
    for (const auto& item : split(range, ',')) axis.values.push_back(parse_number(item, axis.name));
  }
  return axis;
}

json substitute(const json& document, const std::string& pointer, double value) {
  json out = document;
  const json::json_pointer ptr(pointer);
  out[ptr] = value;
  if (pointer == "/ensemble/polarization") {
    if (out.contains("ensemble")) out["ensemble"].erase("optical_pumping_rate");
  } else if (pointer == "/ensemble/optical_pumping_rate") {
    if (out.contains("ensemble")) out["ensemble"].erase("polarization");
  } else if (pointer == "/ensemble/atom_number") {
    if (out.contains("ensemble")) out["ensemble"].erase("density_cm3");
  } else if (pointer == "/ensemble/density_cm3") {
    if (out.contains("ensemble")) out["ensemble"].erase("atom_number");
  }
  return out;
}

RunConfig parse_config(const json& document, const ConstantsTable& constants) {
  std::vector<std::string> issues;
  if (!document.is_object()) throw ConfigError({"top level: expected a JSON object"});

  static const std::set<std::string> sections = {"species", "ensemble", "probe", "drive", "analysis", "sweep"};
  for (const auto& item : document.items())
    if (!sections.count(item.key())) issues.push_back(item.key() + ": unknown section");

  RunConfig cfg;
  cfg.document = document;
  cfg.species = read_species(document, constants, issues);

  Section ens(document, "ensemble", issues);
  cfg.temperature_c = ens.number_or("temperature_c", 0.0);
  cfg.rates.spin_exchange = ens.number_or("spin_exchange_rate", 0.0);
  cfg.rates.spin_destruction = ens.number_or("spin_destruction_rate", 0.0);
  cfg.rates.pump_spin = ens.number_or("pump_spin", 1.0);
  ens.require_non_negative("spin_exchange_rate", cfg.rates.spin_exchange);
  ens.require_non_negative("spin_destruction_rate", cfg.rates.spin_destruction);
  if (!(cfg.rates.pump_spin > 0.0 && cfg.rates.pump_spin <= 1.0)) issues.push_back("ensemble.pump_spin must lie in (0, 1]");
  if (!ens.has("spin_destruction_rate")) issues.push_back("ensemble.spin_destruction_rate: missing");

  // Balance ⟨S_z⟩ between pumping and destruction: p = s R_op / (R_op + R_sd).
  const auto p = ens.number("polarization");
  const auto r_op = ens.number("optical_pumping_rate");
  if (p && r_op) {
    issues.push_back("ensemble: give exactly one of polarization and optical_pumping_rate, not both");
  } else if (!p && !r_op) {
    issues.push_back("ensemble: one of polarization and optical_pumping_rate is required");
  } else if (p) {
    if (!(*p >= 0.0 && *p < cfg.rates.pump_spin))
      issues.push_back("ensemble.polarization must lie in [0, pump_spin)");
    else
      cfg.polarization = *p, cfg.rates.optical_pumping = *p * cfg.rates.spin_destruction / (cfg.rates.pump_spin - *p);
  } else {
    if (!(*r_op >= 0.0)) {
      issues.push_back("ensemble.optical_pumping_rate must be non-negative");
    } else {
      cfg.rates.optical_pumping = *r_op;
      const double total = *r_op + cfg.rates.spin_destruction;
      cfg.polarization = total > 0.0 ? cfg.rates.pump_spin * *r_op / total : 0.0;
    }
  }

  if (const auto b = ens.number("field_gauss"))
    cfg.field_tesla = *b * kTeslaPerGauss;
  else
    issues.push_back("ensemble.field_gauss: missing");
  cfg.cell_length_m = ens.number_or("cell_length_cm", 1.0) * 1e-2;
  ens.require_positive("cell_length_cm", cfg.cell_length_m);

  Section probe(document, "probe", issues);
  const double detuning_ghz = probe.number_or("detuning_ghz", 0.0);
  const std::string convention = probe.text("detuning_convention").value_or("line_minus_probe");
  double probe_minus_line = 0.0;
  if (convention == "line_minus_probe")
    probe_minus_line = -detuning_ghz * 1e9;
  else if (convention == "probe_minus_line")
    probe_minus_line = detuning_ghz * 1e9;
  else
    issues.push_back("probe.detuning_convention: expected line_minus_probe or probe_minus_line");
  const double fwhm_hz = probe.number_or("linewidth_fwhm_ghz", 1.0) * 1e9;
  const double flux = probe.number_or("photon_flux", 1e15);
  const double area_m2 = probe.number_or("beam_area_cm2", 0.1) * kM2PerCm2;
  probe.require_positive("linewidth_fwhm_ghz", fwhm_hz);
  probe.require_positive("photon_flux", flux);
  probe.require_positive("beam_area_cm2", area_m2);
  const auto r_e = probe.number("electron_radius_m");
  probe.reject_unknown();

  const auto density = ens.number("density_cm3");
  const auto atoms = ens.number("atom_number");
  if (density && atoms) {
    issues.push_back("ensemble: give exactly one of atom_number and density_cm3, not both");
  } else if (!density && !atoms) {
    issues.push_back("ensemble: one of atom_number and density_cm3 is required");
  } else if (density) {
    ens.require_positive("density_cm3", *density);
    cfg.density_m3 = *density / kM3PerCm3;
    cfg.atom_number = cfg.density_m3 * area_m2 * cfg.cell_length_m;
  } else {
    ens.require_positive("atom_number", *atoms);
    cfg.atom_number = *atoms;
  }
  ens.reject_unknown();

  if (fwhm_hz > 0.0 && area_m2 > 0.0 && flux > 0.0) {
    cfg.probe = make_probe(cfg.species, probe_minus_line, fwhm_hz, flux, area_m2);
    if (r_e) cfg.probe.electron_radius = *r_e;
  }

  Section drive(document, "drive", issues);
  const auto amp_gauss = drive.number("amplitude_gauss");
  const auto amp_fraction = drive.number("amplitude_fraction");
  if (amp_gauss && amp_fraction)
    issues.push_back("drive: give at most one of amplitude_gauss and amplitude_fraction");
  else if (amp_gauss)
    cfg.drive.amplitude = *amp_gauss * kTeslaPerGauss;
  else
    cfg.drive.amplitude = amp_fraction.value_or(1e-12) * std::abs(cfg.field_tesla);
  drive.require_non_negative("amplitude", cfg.drive.amplitude);
  cfg.drive.b_angle = drive.number_or("b_angle", 0.0);
  cfg.drive.phi = drive.number_or("phi", 0.0);
  drive.reject_unknown();

  Section analysis(document, "analysis", issues);
  cfg.grid.max_hz = analysis.number_or("max_freq_hz", 20e3);
  const double points = analysis.number_or("points", 401);
  const double refine = analysis.number_or("refine_points", 0);
  cfg.grid.refine_widths = analysis.number_or("refine_widths", 5.0);
  analysis.require_positive("max_freq_hz", cfg.grid.max_hz);
  if (points < 2 || points != std::floor(points) || points > 1e7)
    issues.push_back("analysis.points must be an integer in [2, 1e7]");
  if (refine < 0 || refine != std::floor(refine) || refine > 1e7)
    issues.push_back("analysis.refine_points must be an integer in [0, 1e7]");
  cfg.grid.points = static_cast<int>(points);
  cfg.grid.refine_points = static_cast<int>(refine);
  cfg.lockin.record_time = analysis.number_or("record_time_s", 1.0);
  cfg.lockin.time_constant = analysis.number_or("time_constant_s", 0.0);
  analysis.require_positive("record_time_s", cfg.lockin.record_time);
  analysis.require_non_negative("time_constant_s", cfg.lockin.time_constant);
  cfg.layout = read_layout(analysis.text("layout"), issues);
  analysis.reject_unknown();

  if (document.contains("sweep")) {
    const json& sweep = document["sweep"];
    if (!sweep.is_array()) {
      issues.push_back("sweep: expected an array of axis strings");
    } else {
      for (const auto& item : sweep) {
        if (!item.is_string()) {
          issues.push_back("sweep: entries must be strings like \"p=0.1:0.9:5\"");
          continue;
        }
        try {
          cfg.sweep.push_back(parse_sweep_axis(item.get<std::string>()));
        } catch (const std::exception& e) {
          issues.push_back(std::string("sweep: ") + e.what());
        }
      }
    }
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

RunConfig load_config(const std::string& path, const ConstantsTable& constants) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path});
  json document;
  try {
    document = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError({path + ": " + e.what()});
  }
  return parse_config(document, constants);
}

}  // namespace spinopm
