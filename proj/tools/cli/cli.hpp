#pragma once

// Command logic behind the brng tool. Every command reads a run config,
// writes its artifacts plus a manifest into the output directory and maps
// library errors to the process exit-code contract.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "brng/calibrate.hpp"
#include "brng/config_io.hpp"
#include "brng/params.hpp"
#include "brng/sde.hpp"

namespace brng::cli {

using nlohmann::json;

struct Options {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = ".";
  std::optional<unsigned> threads;
  std::vector<std::string> formats;
  std::filesystem::path input;
  std::vector<std::string> argv;
};

struct RunContext {
  std::string command;
  Options opts;
  json resolved;  ///< config with params in rad/s and amplitude specs resolved
  bool has_params = false;
  PhysicalParams params;
  std::vector<std::string> warnings;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  std::string config_digest;
  bool svg = false;
  bool json_stdout = false;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  /// Command block, empty object when absent.
  json block(const std::string& name) const;
  std::filesystem::path out_path(const std::string& file) const { return opts.out / file; }
};

/// --threads, else BRNG_THREADS, else the hardware concurrency (at least 1).
unsigned resolve_threads(std::optional<unsigned> flag);

/// Loads and resolves the config. A manifest written by a previous run is
/// accepted in place of a config and reproduces that run.
RunContext make_context(const std::string& command, const Options& opts, std::ostream& out,
                        std::ostream& err, bool params_required);

/// Number in the 2pi-GHz convention, {"rad_s": v}, or a relative / power block.
double amplitude(const json& spec, const RunContext& ctx, const std::string& field);

SimConfig sim_config(const RunContext& ctx);
EvaluationOptions evaluation_options(const json& blk, const RunContext& ctx);

struct Manifest {
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  json seeds = json::object();
  std::string params_digest;
  json extra = json::object();
};
/// Writes <command>.manifest.json next to the outputs.
void write_manifest(const RunContext& ctx, const Manifest& m, int exit_code);

int cmd_analyze(RunContext& ctx);
int cmd_simulate(RunContext& ctx);
int cmd_distribution(RunContext& ctx);
int cmd_calibrate(RunContext& ctx);
int cmd_sweep(RunContext& ctx);
int cmd_generate(RunContext& ctx);
int cmd_nist(RunContext& ctx);
int cmd_report(RunContext& ctx);

/// Full entry point: parses argv, dispatches, returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace brng::cli
