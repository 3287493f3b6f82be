#include "spinopm/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "spinopm/validation.hpp"

namespace spinopm {
namespace {

using nlohmann::json;

json complex_list(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

json scenario_metadata(const Scenario& sc) {
  const RunConfig& cfg = sc.config;
  return {
      {"species", cfg.species.name},
      {"nuclear_spin", cfg.species.nuclear_spin.str()},
      {"polarization", cfg.polarization},
      {"rates_per_s",
       {{"spin_exchange", cfg.rates.spin_exchange},
        {"spin_destruction", cfg.rates.spin_destruction},
        {"optical_pumping", cfg.rates.optical_pumping},
        {"pump_spin", cfg.rates.pump_spin}}},
      {"field_tesla", cfg.field_tesla},
      {"atom_number", cfg.atom_number},
      {"probe_minus_centroid_hz", cfg.probe.detuning_hz},
      {"d_a", sc.couplings.d_a},
      {"d_b", sc.couplings.d_b},
      {"coupling_G", sc.couplings.coupling},
      {"photon_flux", cfg.probe.photon_flux},
      {"drive_amplitude_tesla", cfg.drive.amplitude},
      {"resonance_hz", sc.system.resonance_hz()},
      {"linewidth_hz", sc.system.linewidth_hz()},
      {"eigenvalues_per_s", complex_list(sc.system.eigenvalues)},
      {"record_time_s", cfg.lockin.record_time},
      {"time_constant_s", sc.time_constant()},
  };
}

void append_spectrum(const Scenario& sc, const std::vector<double>& freqs, Table& t) {
  t.columns = {"freq_hz", "S_spin_effective", "S_measured", "psn_floor", "S_aa", "S_bb", "S_ab_plus_ba"};
  const SpectrumTrace trace = spectrum_trace(sc.system, sc.covariance, sc.projection, sc.couplings,
                                             sc.config.probe.photon_flux, sc.config.atom_number, freqs);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const auto& m = trace.measured[k];
    const auto& s = trace.spin[k];
    t.rows.push_back({m.freq_hz, m.spin_effective, m.measured, m.psn_floor, s.aa, s.bb, s.cross()});
  }
}

void append_response(const Scenario& sc, const std::vector<double>& freqs, Table& t) {
  t.columns.insert(t.columns.end(), {"Ac", "phase_chi"});
  const auto resp = coherent_response(sc.system, sc.projection, sc.config.drive, sc.couplings, freqs);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    t.rows[k].push_back(resp[k].ac);
    t.rows[k].push_back(resp[k].chi);
  }
}

double sql_reference(const Scenario& sc) {
  const HalfInt I = sc.config.species.nuclear_spin;
  const double g_f = constants::kElectronG / I.multiplicity();
  return sql_limit(std::abs(sc.system.slowest_mode().real()), sc.config.atom_number, sc.config.lockin.record_time,
                   upper_manifold(I).value(), g_f);
}

// Expects spectrum and response columns already present.
void append_snr(const Scenario& sc, Table& t) {
  t.columns.insert(t.columns.end(),
                   {"snr", "delta_B_T_per_sqrtHz", "sql_reference", "snr_lockin", "delta_B_lockin_T_per_sqrtHz"});
  const double sql = sql_reference(sc);
  const double gamma = sc.system.gamma_f;
  const double record = sc.config.lockin.record_time;
  for (auto& row : t.rows) {
    const double spin_effective = row[1];
    const double ac = row[7];
    const NoiseBudget budget{sc.config.probe.photon_flux, sc.couplings.coupling, sc.config.atom_number,
                             2.0 * spin_effective};
    row.push_back(snr_published(gamma, sc.config.drive.amplitude, ac, budget, record));
    row.push_back(sensitivity_published(gamma, ac, budget));
    row.push_back(sql);
    row.push_back(snr_lockin(gamma, sc.config.drive.amplitude, ac, budget, record));
    row.push_back(sensitivity_lockin(gamma, ac, budget));
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

std::vector<std::vector<double>> cartesian_product(const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<double>> points{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : points)
      for (double v : axis.values) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    points = std::move(next);
  }
  return points;
}

Table inner_table(const Scenario& sc, const std::string& inner) {
  if (inner == "spectrum") return spectrum_table(sc);
  if (inner == "response") return response_table(sc);
  if (inner == "snr" || inner == "sensitivity") return snr_table(sc);
  if (inner == "summary") return summary_table(sc);
  throw std::invalid_argument("sweep: unknown inner command '" + inner + "'");
}

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace

Table spectrum_table(const Scenario& sc) {
  Table t;
  append_spectrum(sc, sc.frequencies(), t);
  t.metadata = scenario_metadata(sc);
  const std::vector<double> freqs = sc.frequencies();
  std::vector<double> effective;
  for (const auto& row : t.rows) effective.push_back(row[1]);
  const NoiseDip dip = find_noise_dip(freqs, effective);
  t.metadata["noise_dip"] = {{"present", dip.present}, {"freq_hz", dip.freq_hz}, {"depth", dip.depth}};
  return t;
}

Table response_table(const Scenario& sc) {
  Table t = spectrum_table(sc);
  append_response(sc, sc.frequencies(), t);
  return t;
}

Table snr_table(const Scenario& sc) {
  Table t = response_table(sc);
  append_snr(sc, t);
  t.metadata["sql_reference_tesla"] = sql_reference(sc);
  return t;
}

Table summary_table(const Scenario& sc) {
  const Table full = snr_table(sc);
  Table t;
  t.columns = {"resonance_hz", "linewidth_hz", "dip_present", "dip_freq_hz", "dip_depth", "ac_peak_hz", "ac_peak",
               "snr_at_resonance", "snr_spn_only_at_resonance", "delta_B_at_resonance"};
  const auto& dip = full.metadata["noise_dip"];
  const auto peak = std::max_element(full.rows.begin(), full.rows.end(),
                                     [](const auto& a, const auto& b) { return a[7] < b[7]; });
  const double nu = sc.system.resonance_hz();
  const SpinSpectrumPoint spin = qrt_spectrum(sc.system, sc.covariance, sc.projection, nu);
  const MeasuredPoint meas = measured_psd(spin, sc.couplings, sc.config.probe.photon_flux, sc.config.atom_number);
  const ResponsePoint resp = coherent_response(sc.system, sc.projection, sc.config.drive, sc.couplings, nu);
  const NoiseBudget budget{sc.config.probe.photon_flux, sc.couplings.coupling, sc.config.atom_number,
                           2.0 * meas.spin_effective};
  const double gamma = sc.system.gamma_f;
  const double record = sc.config.lockin.record_time;
  // Spin-projection noise alone: the shot-noise term dropped from the radical.
  const double snr_spn = gamma * sc.config.drive.amplitude * resp.ac /
                         (std::sqrt(2.0 / record) * std::sqrt(budget.spin_one_sided / budget.atom_number));
  t.rows.push_back({nu, sc.system.linewidth_hz(), dip["present"].get<bool>() ? 1.0 : 0.0,
                    dip["freq_hz"].get<double>(), dip["depth"].get<double>(), (*peak)[0], (*peak)[7],
                    snr_published(gamma, sc.config.drive.amplitude, resp.ac, budget, record), snr_spn,
                    sensitivity_published(gamma, resp.ac, budget)});
  t.metadata = full.metadata;
  return t;
}

Table sweep_table(const RunConfig& base, const std::vector<SweepAxis>& axes, const std::string& inner, int threads) {
  if (axes.empty()) throw UsageError("sweep: no axes given (use --axis name=start:stop[:n])");
  static const std::vector<std::string> inner_names = {"spectrum", "response", "snr", "sensitivity", "summary"};
  if (std::find(inner_names.begin(), inner_names.end(), inner) == inner_names.end())
    throw UsageError("sweep: unknown inner command '" + inner + "'");

  const auto points = cartesian_product(axes);
  std::vector<Table> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  const ConstantsTable constants = ConstantsTable::load();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        json doc = base.document;
        for (std::size_t a = 0; a < axes.size(); ++a) doc = substitute(doc, axes[a].pointer, points[i][a]);
        RunConfig cfg = parse_config(doc, constants);
        results[i] = inner_table(build_scenario(cfg), inner);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t count = std::min<std::size_t>(threads > 0 ? threads : hw, points.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < count; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Table t;
  for (const auto& axis : axes) t.columns.push_back(axis.name);
  t.columns.insert(t.columns.end(), results.front().columns.begin(), results.front().columns.end());
  t.metadata["axes"] = json::array();
  for (const auto& axis : axes) t.metadata["axes"].push_back({{"name", axis.name}, {"pointer", axis.pointer}});
  t.metadata["points"] = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (const auto& row : results[i].rows) {
      std::vector<double> merged = points[i];
      merged.insert(merged.end(), row.begin(), row.end());
      t.rows.push_back(std::move(merged));
    }
    t.metadata["points"].push_back(results[i].metadata);
  }
  return t;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << "\n";
  }
}

void write_json(std::ostream& out, const Table& table) {
  json records = json::array();
  for (const auto& row : table.rows) {
    json rec = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      // JSON has no inf/nan; the +inf sensitivity sentinel becomes null.
      rec[table.columns[c]] = std::isfinite(row[c]) ? json(row[c]) : json(nullptr);
    }
    records.push_back(std::move(rec));
  }
  out << json{{"columns", table.columns}, {"records", records}, {"metadata", table.metadata}}.dump(2) << "\n";
}

json default_config_document() {
  return json::parse(R"({
  "species": "rb87",
  "ensemble": {
    "temperature_c": 200,
    "density_cm3": 9.21e14,
    "spin_exchange_rate": 8.4e5,
    "spin_destruction_rate": 8.4e3,
    "polarization": 0.1,
    "pump_spin": 1.0,
    "field_gauss": 0.01,
    "cell_length_cm": 1.0
  },
  "probe": {
    "detuning_ghz": -5.7,
    "detuning_convention": "line_minus_probe",
    "linewidth_fwhm_ghz": 1.0,
    "photon_flux": 1e15,
    "beam_area_cm2": 0.1
  },
  "drive": {
    "amplitude_fraction": 1e-12,
    "b_angle": 0.0,
    "phi": 0.0
  },
  "analysis": {
    "max_freq_hz": 20000,
    "points": 401,
    "record_time_s": 1.0
  }
})");
}

int run_command(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> known = {"spectrum", "response", "snr", "sensitivity", "sweep", "validate"};
  if (std::find(known.begin(), known.end(), opt.command) == known.end()) {
    err << "error: unknown command '" << opt.command << "'\n";
    return kExitUsage;
  }
  try {
    const ConstantsTable constants = ConstantsTable::load();
    RunConfig cfg = opt.config_path.empty() ? parse_config(default_config_document(), constants)
                                            : load_config(opt.config_path, constants);
    if (!opt.axes.empty()) cfg.sweep.clear();  // command-line axes replace the config's
    for (const auto& spec : opt.axes) cfg.sweep.push_back(parse_sweep_axis(spec));

    std::ofstream file;
    if (!opt.out_path.empty()) {
      file.open(opt.out_path);
      if (!file) {
        err << "error: cannot write " << opt.out_path << "\n";
        return kExitUsage;
      }
    }
    std::ostream& sink = opt.out_path.empty() ? out : file;

    if (opt.command == "validate") {
      const Scenario sc = build_scenario(cfg);
      ValidationOptions vo;
      vo.driven = vo.time_domain = !opt.quick;
      std::vector<ValidationCheck> checks;
      try {
        checks = validation_suite(sc, vo);
      } catch (const std::runtime_error& e) {
        err << "error: oracle failed: " << e.what() << "\n";
        return kExitValidation;
      }
      json report = json::array();
      for (const auto& c : checks) {
        const char* status = c.informational ? "INFO" : (c.passed ? "PASS" : "FAIL");
        if (opt.format == OutputFormat::csv) {
          sink << status << "  " << c.name << ": " << format_number(c.value);
          if (!c.informational) sink << " (tol " << format_number(c.tolerance) << ")";
          if (!c.detail.empty()) sink << "  [" << c.detail << "]";
          sink << "\n";
        }
        report.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"status", status},
                          {"detail", c.detail}});
      }
      if (opt.format == OutputFormat::json) sink << json{{"checks", report}}.dump(2) << "\n";
      return all_passed(checks) ? kExitOk : kExitValidation;
    }

    Table table;
    if (opt.command == "sweep") {
      table = sweep_table(cfg, cfg.sweep, opt.sweep_of, opt.threads);
    } else {
      const Scenario sc = build_scenario(cfg);
      if (opt.command == "spectrum")
        table = spectrum_table(sc);
      else if (opt.command == "response")
        table = response_table(sc);
      else
        table = snr_table(sc);
      const double perturbation = sc.system.gamma_f * cfg.drive.amplitude;
      const double slowest = std::min(std::abs(sc.system.slowest_mode().real()), std::abs(sc.system.omega0));
      if (opt.command != "spectrum" && perturbation > 0.01 * slowest)
        err << "warning: drive is not perturbative (gamma_F B0 = " << perturbation << " s^-1)\n";
    }
    if (opt.format == OutputFormat::csv)
      write_csv(sink, table);
    else
      write_json(sink, table);
    return kExitOk;
  } catch (const InstabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnstable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace spinopm
