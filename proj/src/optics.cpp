#include "spinopm/optics.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bundled_constants.hpp"
#include "spinopm/constants.hpp"

namespace spinopm {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ConstantsTable ConstantsTable::parse(const std::string& text) {
  ConstantsTable table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("constants line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("constants line " + std::to_string(line_no) + ": empty key or value");
    table.values_[key] = value;
  }
  return table;
}

ConstantsTable ConstantsTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read constants file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

ConstantsTable ConstantsTable::load() {
  if (const char* path = std::getenv("SPINOPM_CONSTANTS"); path && *path) return from_file(path);
  return parse(detail::kBundledConstants);
}

double ConstantsTable::number(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("missing constant " + key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size()) throw std::invalid_argument("constant " + key + " is not a number: " + it->second);
  return v;
}

HalfInt ConstantsTable::spin(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("missing constant " + key);
  try {
    return parse_half_int(it->second);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("constant " + key + " is not an integer or half-integer: " + it->second);
  }
}

HalfInt parse_half_int(const std::string& text) {
  const std::string s = trim(text);
  std::size_t used = 0;
  try {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      const int numerator = std::stoi(s.substr(0, slash), &used);
      if (used != slash || trim(s.substr(slash + 1)) != "2") throw std::invalid_argument(s);
      return half(numerator);
    }
    const int value = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return HalfInt(value);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer or half-integer: " + text);
  }
}

double SpeciesSpec::hyperfine_omega() const {
  return 2 * constants::kPi * hyperfine_splitting_hz / (nuclear_spin.value() + 0.5);
}

SpeciesSpec species_from_table(const ConstantsTable& table, const std::string& name) {
  const std::string prefix = name + ".";
  if (!table.contains(prefix + "nuclear_spin")) throw std::invalid_argument("unknown species " + name);
  SpeciesSpec s;
  s.name = name;
  s.nuclear_spin = table.spin(prefix + "nuclear_spin");
  s.hyperfine_splitting_hz = table.number(prefix + "hyperfine_splitting_hz");
  s.line_frequency_hz = table.number(prefix + "d1.frequency_hz");
  s.f_osc = table.number(prefix + "d1.f_osc");
  s.j_excited = table.spin(prefix + "d1.j_excited");
  return s;
}

ProbeSpec make_probe(const SpeciesSpec& species, double detuning_hz, double gamma_fwhm_hz, double photon_flux,
                     double area_m2) {
  if (!(gamma_fwhm_hz > 0.0)) throw std::invalid_argument("optical linewidth must be positive");
  if (!(area_m2 > 0.0)) throw std::invalid_argument("beam area must be positive");
  if (photon_flux < 0.0) throw std::invalid_argument("photon flux must be non-negative");
  const double two_mult = 2.0 * species.nuclear_spin.multiplicity();
  const double mult_a = upper_manifold(species.nuclear_spin).multiplicity();
  const double mult_b = lower_manifold(species.nuclear_spin).multiplicity();
  ProbeSpec p;
  p.detuning_hz = detuning_hz;
  p.nu_a_hz = -mult_b / two_mult * species.hyperfine_splitting_hz;
  p.nu_b_hz = mult_a / two_mult * species.hyperfine_splitting_hz;
  p.gamma_hwhm_hz = 0.5 * gamma_fwhm_hz;
  p.f_osc = species.f_osc;
  p.area_m2 = area_m2;
  p.photon_flux = photon_flux;
  p.j_excited = species.j_excited;
  return p;
}

double detuning_factor(double detuning_hz, double transition_hz, double gamma_hwhm_hz) {
  const double x = (detuning_hz - transition_hz) / gamma_hwhm_hz;
  return x / (x * x + 1.0);
}

double resonant_cross_section(const ProbeSpec& probe) {
  const double r_e = probe.electron_radius > 0.0 ? probe.electron_radius : constants::kElectronRadius;
  return constants::kSpeedOfLight * r_e * probe.f_osc / probe.gamma_hwhm_hz;
}

ProbeCouplings probe_couplings(const ProbeSpec& probe, HalfInt nuclear_spin) {
  if (!(probe.gamma_hwhm_hz > 0.0) || !(probe.area_m2 > 0.0)) throw std::invalid_argument("invalid probe");
  ProbeCouplings c;
  c.d_a = detuning_factor(probe.detuning_hz, probe.nu_a_hz, probe.gamma_hwhm_hz);
  c.d_b = detuning_factor(probe.detuning_hz, probe.nu_b_hz, probe.gamma_hwhm_hz);
  c.coupling = 4.0 / (probe.j_excited.multiplicity() * nuclear_spin.multiplicity()) *
               resonant_cross_section(probe) / probe.area_m2;
  c.g_a = c.coupling * c.d_a;
  c.g_b = c.coupling * c.d_b;
  return c;
}

}  // namespace spinopm
