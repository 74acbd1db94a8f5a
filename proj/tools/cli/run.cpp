#include <CLI11.hpp>
#include <ostream>

#include "brng/error.hpp"
#include "cli/cli.hpp"

#ifndef BRNG_VERSION
#define BRNG_VERSION "dev"
#endif

namespace brng::cli {

const char* version() { return BRNG_VERSION; }

namespace {

constexpr const char* kFooter = R"(Exit codes: 0 success, 1 config error, 2 regime not satisfied,
            3 statistical failure, 4 numerical failure.
BRNG_THREADS caps worker threads when --threads is absent.

Examples:
  brng analyze --config configs/reference.json
  brng simulate --config configs/reference.json --out run --format svg
  brng distribution --config configs/reference.json --out run
  brng calibrate --config configs/reference.json --out run --seed 7
  brng sweep --config configs/seed_sweep.json --out sweep --threads 4 --format svg
  brng generate --config configs/reference.json --out run
  brng nist --input run/bits.bin --out run
  brng report --out run --format svg
  brng calibrate --config run/calibrate.manifest.json --out rerun)";

struct Command {
  const char* name;
  const char* help;
  int (*fn)(RunContext&);
  bool needs_params;
};

const Command kCommands[] = {
    {"analyze", "Derived rates, closed-form thresholds, numerical bistable window", cmd_analyze, true},
    {"simulate", "Integrate the stochastic equations and write a trajectory", cmd_simulate, true},
    {"distribution", "PDF/CDF, boundary, occupancy and dwell times of a trajectory", cmd_distribution, false},
    {"calibrate", "Find the pump amplitude with p_g = 0.5 and its lifetimes", cmd_calibrate, true},
    {"sweep", "Map p_g and lifetimes over an (Omega1, Omega2) grid", cmd_sweep, true},
    {"generate", "Generate a bitstream from a calibration", cmd_generate, false},
    {"nist", "Run the fifteen SP 800-22 tests on a bit file", cmd_nist, false},
    {"report", "Collect a run directory into one JSON (and SVG figures)", cmd_report, false},
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Brillouin-laser random bit generator: simulation, calibration and testing", "brng"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("brng ") + version());

  Options opts;
  for (int i = 0; i < argc; ++i) opts.argv.emplace_back(argv[i]);
  std::string config, out_dir = ".", input;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::vector<std::string> formats;
  std::string chosen;

  for (const auto& c : kCommands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config, "Run config (JSON) or a manifest of a previous run");
    sub->add_option("--seed", seed, "Override master_seed");
    sub->add_option("--out", out_dir, "Output directory (created if missing)");
    sub->add_option("--threads", threads, "Worker thread cap (fallback BRNG_THREADS)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", formats, "csv, json (JSON summary on stdout) or svg (figures); repeatable")
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->delimiter(',');
    sub->add_option("--input", input, "Input file or run directory");
    sub->callback([&chosen, name = c.name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kConfig);
  }
  opts.config = config;
  opts.out = out_dir;
  opts.input = input;
  opts.seed = seed;
  opts.threads = threads;
  opts.formats = formats;

  for (const auto& c : kCommands) {
    if (chosen != c.name) continue;
    try {
      RunContext ctx = make_context(c.name, opts, out, err, c.needs_params);
      return c.fn(ctx);
    } catch (const Error& e) {
      err << "brng " << c.name << ": " << e.what() << "\n";
      return static_cast<int>(e.exit_code());
    } catch (const nlohmann::json::exception& e) {
      err << "brng " << c.name << ": config: " << e.what() << "\n";
      return static_cast<int>(ExitCode::kConfig);
    } catch (const std::filesystem::filesystem_error& e) {
      err << "brng " << c.name << ": " << e.what() << "\n";
      return static_cast<int>(ExitCode::kConfig);
    } catch (const std::exception& e) {
      err << "brng " << c.name << ": " << e.what() << "\n";
      return static_cast<int>(ExitCode::kNumerical);
    }
  }
  return static_cast<int>(ExitCode::kConfig);
}

}  // namespace brng::cli
