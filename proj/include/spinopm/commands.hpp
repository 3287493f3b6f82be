#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinopm/config.hpp"
#include "spinopm/scenario.hpp"

namespace spinopm {

enum class OutputFormat { csv, json };

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitUnstable = 2, kExitValidation = 3 };

// Column-major results; metadata only appears in the JSON form.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata = nlohmann::json::object();
};

Table spectrum_table(const Scenario& scenario);
Table response_table(const Scenario& scenario);   // spectrum + Ac, phase_chi
Table snr_table(const Scenario& scenario);        // response + snr, sensitivity, SQL

// One row per scenario: resonance, linewidth, noise dip, A_c peak, SNR at ν_res.
Table summary_table(const Scenario& scenario);

// Cartesian product of the axes (first axis slowest). Each point runs
// `inner` ("spectrum", "response", "snr" or "summary") and its rows are
// prefixed with the axis values. Points run on `threads` workers; rows are
// merged in axis order regardless of scheduling.
Table sweep_table(const RunConfig& base, const std::vector<SweepAxis>& axes, const std::string& inner, int threads);

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);

struct CommandOptions {
  std::string command;      // spectrum | response | snr | sensitivity | sweep | validate
  std::string config_path;  // empty: the built-in reference configuration
  std::string out_path;     // empty: stdout
  OutputFormat format = OutputFormat::csv;
  std::vector<std::string> axes;
  std::string sweep_of = "summary";
  int threads = 0;          // 0: hardware concurrency
  bool quick = false;       // validate: skip the driven and time-domain oracles
};

// Runs one command, writing results to the out path or `out` and
// diagnostics to `err`. Returns an ExitCode.
int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err);

// Built-in SERF reference configuration, identical to configs/fig3.json.
nlohmann::json default_config_document();

}  // namespace spinopm
