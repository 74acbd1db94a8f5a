#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "brng/digest.hpp"
#include "brng/error.hpp"
#include "brng/log.hpp"
#include "cli/cli.hpp"

namespace brng::cli {
namespace {

std::string file_digest(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "";
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_hex(ss.str());
}

bool is_amplitude_block(const json& j) {
  return j.is_object() && (j.contains("relative_to") || j.contains("power_w"));
}

// Replace every relative or power amplitude block by its absolute value so
// the echoed config no longer depends on threshold conventions.
void resolve_amplitudes(json& j, const RunContext& ctx, const std::string& path) {
  if (is_amplitude_block(j)) {
    j = json{{"rad_s", amplitude(j, ctx, path)}};
    return;
  }
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) resolve_amplitudes(it.value(), ctx, path + "." + it.key());
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) resolve_amplitudes(j[i], ctx, path + "[" + std::to_string(i) + "]");
  }
}

ThresholdReference threshold_reference(const json& cfg) {
  const std::string r = cfg.value("threshold_reference", "closed_form");
  if (r == "closed_form") return ThresholdReference::kClosedForm;
  if (r == "numerical") return ThresholdReference::kNumerical;
  throw ConfigError("threshold_reference must be 'closed_form' or 'numerical'");
}

}  // namespace

json RunContext::block(const std::string& name) const {
  if (resolved.contains(name)) {
    const json& b = resolved.at(name);
    if (!b.is_object()) throw ConfigError("config block '" + name + "' must be an object");
    return b;
  }
  return json::object();
}

unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag) return std::max(1u, *flag);
  if (const char* env = std::getenv("BRNG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    warn(std::string("ignoring BRNG_THREADS='") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double amplitude(const json& spec, const RunContext& ctx, const std::string& field) {
  if (spec.is_object() && spec.contains("rad_s")) {
    if (!spec.at("rad_s").is_number()) throw ConfigError(field + ": 'rad_s' must be a number");
    return spec.at("rad_s").get<double>();
  }
  if (!ctx.has_params) throw ConfigError(field + ": amplitude needs a parameter set");
  return resolve_amplitude(spec, ctx.params, threshold_reference(ctx.resolved), field);
}

RunContext make_context(const std::string& command, const Options& opts, std::ostream& out,
                        std::ostream& err, bool params_required) {
  RunContext ctx;
  ctx.command = command;
  ctx.opts = opts;
  ctx.out = &out;
  ctx.err = &err;
  ctx.threads = resolve_threads(opts.threads);
  for (const auto& f : opts.formats) {
    if (f == "svg") ctx.svg = true;
    else if (f == "json") ctx.json_stdout = true;
    else if (f != "csv") throw ConfigError("--format must be csv, json or svg (got '" + f + "')");
  }

  json cfg = json::object();
  std::filesystem::path base = ".";
  if (!opts.config.empty()) {
    cfg = read_json_file(opts.config);
    base = opts.config.parent_path();
    if (cfg.contains("resolved_config")) cfg = cfg.at("resolved_config");
    if (!cfg.is_object()) throw ConfigError(opts.config.string() + ": config must be a JSON object");
  } else if (params_required) {
    throw ConfigError(command + " needs --config");
  }

  if (cfg.contains("params_file") && !cfg.contains("params")) {
    std::filesystem::path pf = cfg.at("params_file").get<std::string>();
    if (pf.is_relative()) pf = base / pf;
    cfg["params"] = read_json_file(pf);
    cfg.erase("params_file");
  }
  const ThresholdReference ref = threshold_reference(cfg);
  if (cfg.contains("params")) {
    const json& pj = cfg.at("params");
    if (pj.is_object() && pj.value("units", "") == "rad/s") {
      try {
        ctx.params = params_from_resolved_json(pj);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("params: ") + e.what());
      }
      validate(ctx.params);
    } else {
      ResolvedParams rp = resolve_params(pj, ref);
      ctx.params = rp.params;
      ctx.warnings = rp.warnings;
    }
    ctx.has_params = true;
  } else if (params_required) {
    throw ConfigError("config has no 'params' block");
  }
  for (const auto& w : ctx.warnings) warn(w);

  ctx.master_seed = opts.seed.value_or(cfg.value("master_seed", std::uint64_t{0}));
  ctx.resolved = cfg;
  if (ctx.has_params) ctx.resolved["params"] = to_json(ctx.params);
  ctx.resolved["master_seed"] = ctx.master_seed;
  resolve_amplitudes(ctx.resolved, ctx, "config");
  ctx.config_digest = fnv1a_hex(ctx.resolved.dump());
  std::filesystem::create_directories(opts.out);
  return ctx;
}

SimConfig sim_config(const RunContext& ctx) {
  const json blk = ctx.block("sim");
  SimConfig cfg = sim_config_from_json(blk);
  try {
    if (blk.contains("burn_in_time")) {
      cfg.burn_in_steps =
          static_cast<std::uint64_t>(std::llround(blk.at("burn_in_time").get<double>() / cfg.dt));
    } else if (!blk.contains("burn_in_steps") && ctx.has_params) {
      cfg.burn_in_steps = default_burn_in_steps(ctx.params, cfg.dt);
    }
    // duration counts recorded time only
    if (blk.contains("duration")) {
      cfg.n_steps = cfg.burn_in_steps + static_cast<std::uint64_t>(
                                            std::llround(blk.at("duration").get<double>() / cfg.dt));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sim block: ") + e.what());
  }
  cfg.seed = ctx.master_seed;
  return cfg;
}

EvaluationOptions evaluation_options(const json& blk, const RunContext& ctx) {
  const SimConfig sim = sim_config(ctx);
  EvaluationOptions o;
  o.dt = sim.dt;
  o.scheme = sim.scheme;
  o.noise_scale = sim.noise_scale;
  try {
    o.record_stride = blk.value("record_stride", o.record_stride);
    o.target_transitions = blk.value("target_transitions", o.target_transitions);
    o.chunk_time = blk.value("chunk_time", o.chunk_time);
    o.max_sim_time = blk.value("max_sim_time", o.max_sim_time);
    if (blk.contains("burn_in_time")) o.burn_in_time = blk.at("burn_in_time").get<double>();
    const std::string disc = blk.value("discriminator", "pdf-minimum");
    if (disc == "pdf-minimum") o.discriminator = Discriminator::kPdfMinimum;
    else if (disc == "saddle") o.discriminator = Discriminator::kSaddle;
    else throw ConfigError("discriminator must be 'pdf-minimum' or 'saddle'");
    o.dwell.hysteresis_fraction = blk.value("hysteresis", o.dwell.hysteresis_fraction);
    o.dwell.min_transitions = blk.value("min_transitions", o.dwell.min_transitions);
    o.dwell.balance_tolerance = blk.value("balance_tolerance", o.dwell.balance_tolerance);
    o.dwell.bootstrap_replicates = blk.value("bootstrap_replicates", o.dwell.bootstrap_replicates);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("calibration options: ") + e.what());
  }
  if (o.dwell.hysteresis_fraction < 0 || o.dwell.hysteresis_fraction >= 0.5) {
    throw ConfigError("hysteresis must lie in [0, 0.5)");
  }
  return o;
}

void write_manifest(const RunContext& ctx, const Manifest& m, int exit_code) {
  json inputs = json::array(), outputs = json::array();
  for (const auto& p : m.inputs) inputs.push_back({{"path", p.string()}, {"fnv1a", file_digest(p)}});
  for (const auto& p : m.outputs) {
    outputs.push_back({{"path", p.filename().string()}, {"fnv1a", file_digest(p)}});
  }
  json j{{"tool", "brng"},
         {"version", version()},
         {"command", ctx.command},
         {"argv", ctx.opts.argv},
         {"config_digest", ctx.config_digest},
         {"master_seed", ctx.master_seed},
         {"seeds", m.seeds},
         {"threads", ctx.threads},
         {"exit_code", exit_code},
         {"inputs", inputs},
         {"outputs", outputs},
         {"resolved_config", ctx.resolved}};
  if (!m.params_digest.empty()) j["params_digest"] = m.params_digest;
  for (auto it = m.extra.begin(); it != m.extra.end(); ++it) j[it.key()] = it.value();
  write_json_file(ctx.out_path(ctx.command + ".manifest.json"), j);
}

}  // namespace brng::cli
