#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "spinopm/commands.hpp"

int main(int argc, char** argv) {
  using namespace spinopm;
  CLI::App app{"Spin-noise, response and sensitivity of optically pumped magnetometers"};
  app.set_version_flag("--version", "spinopm 0.1.0");

  CommandOptions opt;
  std::string format = "csv";
  app.add_option("command", opt.command, "spectrum | response | snr | sensitivity | sweep | validate")
      ->required()
      ->check(CLI::IsMember({"spectrum", "response", "snr", "sensitivity", "sweep", "validate"}));
  app.add_option("--config", opt.config_path, "JSON run configuration (default: built-in reference set)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", opt.out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--axis", opt.axes, "sweep axis name=start:stop[:n] or name=v1,v2 (repeatable)");
  app.add_option("--sweep-of", opt.sweep_of, "per-point output of sweep: summary | spectrum | response | snr | sensitivity")
      ->check(CLI::IsMember({"summary", "spectrum", "response", "snr", "sensitivity"}));
  app.add_option("--threads", opt.threads, "sweep workers (0: all cores)")->check(CLI::NonNegativeNumber);
  app.add_flag("--quick", opt.quick, "validate: skip the driven and time-domain oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  opt.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  return run_command(opt, std::cout, std::cerr);
}
