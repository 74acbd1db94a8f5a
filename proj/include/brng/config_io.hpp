#pragma once

// JSON parameter and simulation-config files.
//
// Parameter files give rates and detunings as plain numbers in the
// "value / 2pi in GHz" convention (gamma1 = 0.191 means 2pi * 0.191 GHz).
// Drive amplitudes may be absolute numbers in the same convention, or
//   {"relative_to": "omega_th" | "omega_ex" | "omega_lo" | "omega_hi", "factor": x}
// or a pump-power block {"power_w": P, "kappa_ex": k, "carrier_thz": f}.

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "brng/params.hpp"
#include "brng/sde.hpp"

namespace brng {

using nlohmann::json;

enum class ThresholdReference {
  kClosedForm,  ///< "omega_th" resolves against the closed-form threshold
  kNumerical,   ///< "omega_th" resolves against the numerical window edge omega_hi
};

struct ResolvedParams {
  PhysicalParams params;
  std::vector<std::string> warnings;
};

/// Throws ConfigError with a readable message on missing or ill-typed fields.
ResolvedParams resolve_params(const json& j,
                              ThresholdReference ref = ThresholdReference::kClosedForm);

/// Resolve an amplitude spec (number, relative block or power block) to rad/s.
double resolve_amplitude(const json& spec, const PhysicalParams& p, ThresholdReference ref,
                         const std::string& field);

/// Parse JSON text; ConfigError carries line/column of syntax errors.
json parse_json_text(const std::string& text, const std::string& origin);
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

json to_json(const PhysicalParams& p);  ///< rad/s
PhysicalParams params_from_resolved_json(const json& j);  ///< inverse of to_json
json to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const json& j, const SimConfig& defaults = {});

/// Digest of the resolved parameters plus the simulation config.
std::string params_digest(const PhysicalParams& p, const SimConfig& cfg);

}  // namespace brng
