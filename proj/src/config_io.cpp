#include "brng/config_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "brng/digest.hpp"
#include "brng/error.hpp"
#include "brng/steady_state.hpp"

namespace brng {
namespace {

double number_field(const json& j, const char* key, bool required, double fallback = 0.0) {
  if (!j.contains(key)) {
    if (required) throw ConfigError(std::string("missing parameter '") + key + "'");
    return fallback;
  }
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

const char* kRateFields[] = {"gamma1", "gamma2", "gamma_b", "domega1",
                             "domega2", "omega_b", "g"};

}  // namespace

double resolve_amplitude(const json& spec, const PhysicalParams& p, ThresholdReference ref,
                         const std::string& field) {
  if (spec.is_number()) return spec.get<double>() * kAngularGHz;
  if (!spec.is_object()) throw ConfigError("amplitude '" + field + "' must be a number or object");
  if (spec.contains("relative_to")) {
    const std::string to = spec.at("relative_to").get<std::string>();
    if (!spec.contains("factor") || !spec.at("factor").is_number()) {
      throw ConfigError("amplitude '" + field + "': relative spec needs a numeric 'factor'");
    }
    const double factor = spec.at("factor").get<double>();
    PhysicalParams base = p;
    base.omega_pump1 = base.omega_pump2 = 0.0;
    if (to == "omega_th" && ref == ThresholdReference::kClosedForm) {
      return factor * closed_form_thresholds(base).omega_th;
    }
    if (to == "omega_ex") return factor * closed_form_thresholds(base).omega_ex;
    if (to == "omega_th" || to == "omega_hi" || to == "omega_lo") {
      const auto window = bistable_window_numeric(base);
      if (!window) throw ConfigError("amplitude '" + field + "': no numerical bistable window");
      return factor * (to == "omega_lo" ? window->omega_lo : window->omega_hi);
    }
    throw ConfigError("amplitude '" + field + "': unknown reference '" + to + "'");
  }
  if (spec.contains("power_w")) {
    PumpPowerSpec s;
    s.power = spec.at("power_w").get<double>();
    s.kappa_ex = number_field(spec, "kappa_ex", true) * kAngularGHz;
    s.omega = number_field(spec, "carrier_thz", true) * kTwoPi * 1e12;
    try {
      return pump_amplitude_from_power(s);
    } catch (const DomainError& e) {
      throw ConfigError("amplitude '" + field + "': " + e.what());
    }
  }
  throw ConfigError("amplitude '" + field + "': expected 'relative_to' or 'power_w'");
}

ResolvedParams resolve_params(const json& j, ThresholdReference ref) {
  if (!j.is_object()) throw ConfigError("parameter block must be a JSON object");
  ResolvedParams out;
  PhysicalParams& p = out.params;
  double* targets[] = {&p.gamma1, &p.gamma2, &p.gamma_b, &p.domega1,
                       &p.domega2, &p.omega_b, &p.g};
  for (std::size_t i = 0; i < std::size(kRateFields); ++i) {
    *targets[i] = number_field(j, kRateFields[i], true) * kAngularGHz;
  }
  p.nbar = number_field(j, "nbar", true);
  try {
    validate(p);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  const double pump1 = j.contains("omega_pump1")
                           ? resolve_amplitude(j.at("omega_pump1"), p, ref, "omega_pump1")
                           : 0.0;
  const double pump2 = j.contains("omega_pump2")
                           ? resolve_amplitude(j.at("omega_pump2"), p, ref, "omega_pump2")
                           : 0.0;
  p.omega_pump1 = pump1;
  p.omega_pump2 = pump2;
  if (!detunings_consistent(p)) {
    std::ostringstream os;
    os << "domega2 = " << p.domega2 / kAngularGHz << " differs from domega1 - omega_b = "
       << (p.domega1 - p.omega_b) / kAngularGHz << " (2pi GHz) beyond the consistency tolerance";
    out.warnings.push_back(os.str());
  }
  return out;
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": malformed JSON (byte " << e.byte << ")";
    throw ConfigError(os.str());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

json to_json(const PhysicalParams& p) {
  return json{{"gamma1", p.gamma1},   {"gamma2", p.gamma2},
              {"gamma_b", p.gamma_b}, {"domega1", p.domega1},
              {"domega2", p.domega2}, {"omega_b", p.omega_b},
              {"g", p.g},             {"nbar", p.nbar},
              {"omega_pump1", p.omega_pump1}, {"omega_pump2", p.omega_pump2},
              {"units", "rad/s"}};
}

PhysicalParams params_from_resolved_json(const json& j) {
  PhysicalParams p;
  p.gamma1 = j.at("gamma1").get<double>();
  p.gamma2 = j.at("gamma2").get<double>();
  p.gamma_b = j.at("gamma_b").get<double>();
  p.domega1 = j.at("domega1").get<double>();
  p.domega2 = j.at("domega2").get<double>();
  p.omega_b = j.at("omega_b").get<double>();
  p.g = j.at("g").get<double>();
  p.nbar = j.at("nbar").get<double>();
  p.omega_pump1 = j.at("omega_pump1").get<double>();
  p.omega_pump2 = j.at("omega_pump2").get<double>();
  return p;
}

json to_json(const SimConfig& cfg) {
  json j{{"dt", cfg.dt},
         {"n_steps", cfg.n_steps},
         {"burn_in_steps", cfg.burn_in_steps},
         {"record_stride", cfg.record_stride},
         {"seed", cfg.seed},
         {"scheme", to_string(cfg.scheme)},
         {"record_full_complex", cfg.record_full_complex},
         {"noise_scale", cfg.noise_scale}};
  if (cfg.initial) {
    const ModeState& s = *cfg.initial;
    j["initial"] = {s.a1.real(), s.a1.imag(), s.a2.real(), s.a2.imag(), s.b.real(), s.b.imag()};
  }
  return j;
}

SimConfig sim_config_from_json(const json& j, const SimConfig& defaults) {
  SimConfig cfg = defaults;
  if (!j.is_object()) throw ConfigError("sim block must be a JSON object");
  try {
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("n_steps")) cfg.n_steps = j.at("n_steps").get<std::uint64_t>();
    if (j.contains("burn_in_steps") && j.at("burn_in_steps").is_number()) {
      cfg.burn_in_steps = j.at("burn_in_steps").get<std::uint64_t>();
    }
    if (j.contains("record_stride")) cfg.record_stride = j.at("record_stride").get<std::uint64_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("scheme")) cfg.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    if (j.contains("record_full_complex")) {
      cfg.record_full_complex = j.at("record_full_complex").get<bool>();
    }
    if (j.contains("noise_scale")) cfg.noise_scale = j.at("noise_scale").get<double>();
    if (j.contains("initial")) {
      const auto v = j.at("initial").get<std::vector<double>>();
      if (v.size() != 6) throw ConfigError("sim.initial needs 6 numbers");
      cfg.initial = ModeState{cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5])};
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sim block: ") + e.what());
  }
  return cfg;
}

std::string params_digest(const PhysicalParams& p, const SimConfig& cfg) {
  const json j{{"params", to_json(p)}, {"sim", to_json(cfg)}};
  return fnv1a_hex(j.dump());
}

}  // namespace brng
