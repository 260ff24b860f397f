// Command-line front end: `run` executes a full scenario from a JSON config,
// `info` prints the resolution report, `analyze` re-runs estimation and
// micro-Doppler extraction on a saved channel-matrix file.
//
// Exit codes: 0 success, 2 configuration/usage errors, 3 runtime failures.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omds/errors.hpp"
#include "omds/io.hpp"
#include "omds/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::vector<omds::ExportFormat> parse_formats(const std::string& list) {
  std::vector<omds::ExportFormat> formats;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (cur == "bin") {
      formats.push_back(omds::ExportFormat::Bin);
    } else if (cur == "csv") {
      formats.push_back(omds::ExportFormat::Csv);
    } else if (cur == "pgm") {
      formats.push_back(omds::ExportFormat::Pgm);
    } else {
      omds::fail(omds::ErrorCode::ConfigError, "unknown format: " + cur);
    }
    cur.clear();
  };
  for (char ch : list) {
    if (ch == ',') {
      flush();
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  return formats;
}

void print_summary(const omds::RunResult& result) {
  std::cout << "range_hat_m = " << omds::format_double(result.estimate.range) << '\n'
            << "velocity_hat_mps = " << omds::format_double(result.estimate.velocity) << '\n'
            << "max_doppler_hz = " << omds::format_double(result.max_doppler_hz) << '\n';
  if (result.rotation_rate) {
    std::cout << "rotation_rate_rps = " << omds::format_double(*result.rotation_rate) << '\n';
  }
  if (result.blade_length) {
    std::cout << "blade_length_m = " << omds::format_double(*result.blade_length) << '\n';
  }
  std::cout << "artifacts = " << result.manifest.size() << " file(s) in "
            << result.out_dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDM mmWave sensing simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string formats;
  std::string channel_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 1;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "run a full scenario");
  run->add_option("--config", config_path, "scenario config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });
  run->add_option("--format", formats, "comma-separated list: bin,csv,pgm");
  run->add_option("--threads", threads, "worker threads for synthesis");
  run->add_flag("--quiet", quiet, "suppress the result summary");

  CLI::App* info = app.add_subcommand("info", "print the resolution report");
  info->add_option("--config", config_path, "scenario config (JSON)")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "process a saved channel matrix");
  analyze->add_option("--config", config_path, "scenario config (JSON)")->required();
  analyze->add_option("--channel", channel_path, "channel matrix (.bin)")->required();
  analyze->add_option("--out", out_dir, "output directory override");
  analyze->add_flag("--quiet", quiet, "suppress the result summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const omds::ScenarioConfig scenario = omds::load_scenario(config_path);
    omds::RunOptions options;
    if (!out_dir.empty()) options.out_dir = out_dir;
    if (seed_set) options.seed = seed;
    if (!formats.empty()) options.formats = parse_formats(formats);
    options.threads = threads;

    if (*run) {
      const omds::RunResult result = omds::run_scenario(scenario, options);
      if (!quiet) print_summary(result);
    } else if (*info) {
      std::cout << omds::scenario_info(scenario);
    } else if (*analyze) {
      const omds::RunResult result = omds::analyze_channel(scenario, channel_path, options);
      if (!quiet) print_summary(result);
    }
    return kExitOk;
  } catch (const omds::SimError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == omds::ErrorCode::ConfigError ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
