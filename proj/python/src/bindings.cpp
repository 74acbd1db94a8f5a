#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "brng/bit_io.hpp"
#include "brng/bitgen.hpp"
#include "brng/calibrate.hpp"
#include "brng/config_io.hpp"
#include "brng/nist.hpp"
#include "brng/params.hpp"
#include "brng/sde.hpp"
#include "brng/steady_state.hpp"
#include "brng/trace_stats.hpp"

namespace py = pybind11;
using namespace py::literals;
using nlohmann::json;

namespace {

// Dict-valued results cross the boundary as JSON text; the Python side
// decodes them.
std::string dump(const json& j) { return j.dump(); }

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

std::vector<std::uint8_t> to_bits(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
  std::vector<std::uint8_t> v(a.data(), a.data() + a.size());
  for (auto& b : v) b = b != 0;
  return v;
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

brng::EvaluationOptions evaluation_from(const json& o) {
  brng::EvaluationOptions e;
  e.dt = o.value("dt", e.dt);
  if (o.contains("scheme")) e.scheme = brng::scheme_from_string(o.at("scheme").get<std::string>());
  e.noise_scale = o.value("noise_scale", e.noise_scale);
  e.record_stride = o.value("record_stride", e.record_stride);
  e.target_transitions = o.value("target_transitions", e.target_transitions);
  e.chunk_time = o.value("chunk_time", e.chunk_time);
  e.max_sim_time = o.value("max_sim_time", e.max_sim_time);
  if (o.contains("burn_in_time")) e.burn_in_time = o.at("burn_in_time").get<double>();
  e.dwell.hysteresis_fraction = o.value("hysteresis", e.dwell.hysteresis_fraction);
  e.dwell.min_transitions = o.value("min_transitions", e.dwell.min_transitions);
  return e;
}

brng::NistTest test_from(const std::string& name) { return brng::nist_test_from_string(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Brillouin-laser random bit generator core";
  m.attr("__version__") = "0.1.0";

  py::class_<brng::PhysicalParams>(m, "PhysicalParams", "Rates, detunings and drives in rad/s")
      .def(py::init<>())
      .def_readwrite("gamma1", &brng::PhysicalParams::gamma1)
      .def_readwrite("gamma2", &brng::PhysicalParams::gamma2)
      .def_readwrite("gamma_b", &brng::PhysicalParams::gamma_b)
      .def_readwrite("domega1", &brng::PhysicalParams::domega1)
      .def_readwrite("domega2", &brng::PhysicalParams::domega2)
      .def_readwrite("omega_b", &brng::PhysicalParams::omega_b)
      .def_readwrite("g", &brng::PhysicalParams::g)
      .def_readwrite("nbar", &brng::PhysicalParams::nbar)
      .def_readwrite("omega_pump1", &brng::PhysicalParams::omega_pump1)
      .def_readwrite("omega_pump2", &brng::PhysicalParams::omega_pump2)
      .def("__repr__", [](const brng::PhysicalParams& p) {
        return "PhysicalParams(" + brng::to_json(p).dump() + ")";
      });

  m.def("reference_params", &brng::reference_params, "Parameter set of the reference traces");
  m.def("params_from_config", [](const std::string& text) {
    return brng::resolve_params(brng::parse_json_text(text, "params")).params;
  });

  m.def("derived_rates", [](const brng::PhysicalParams& p) {
    const auto d = brng::derived_rates(p);
    return dump({{"delta_omega", d.delta_omega}, {"Delta2", d.Delta2}, {"Delta_b", d.Delta_b},
                 {"Gamma", d.Gamma}, {"compact_forms_hold", d.compact_forms_hold}});
  });
  m.def("thresholds", [](const brng::PhysicalParams& p) {
    const auto t = brng::closed_form_thresholds(p);
    return dump({{"omega_ex", t.omega_ex}, {"omega_th", t.omega_th}, {"j_b", t.j_b},
                 {"omega_th_printed", t.omega_th_printed}});
  });
  m.def("regime_report", [](const brng::PhysicalParams& p) {
    const auto r = brng::regime_report(p);
    return dump({{"hard_excitation", r.hard_excitation},
                 {"hard_excitation_bound", r.hard_excitation_bound},
                 {"jump_visibility_bound", r.jump_visibility_bound},
                 {"jump_visible", r.jump_visible},
                 {"criterion_ratio", r.criterion_ratio},
                 {"criterion_satisfied", r.criterion_satisfied},
                 {"bistable_closed_form", r.bistable_closed_form},
                 {"notes", r.notes}});
  });
  m.def("bistable_window", [](const brng::PhysicalParams& p) -> py::object {
    const auto w = brng::bistable_window_numeric(p);
    if (!w) return py::none();
    return py::make_tuple(w->omega_lo, w->omega_hi);
  }, "(omega_lo, omega_hi) in rad/s, or None");
  m.def("steady_states", [](const brng::PhysicalParams& p, double omega1) {
    json out = json::array();
    for (const auto& fp : brng::steady_states_numeric(p, omega1)) {
      out.push_back({{"a2_sq", std::norm(fp.state.a2)}, {"b_sq", std::norm(fp.state.b)},
                     {"a1_sq", std::norm(fp.state.a1)}, {"generating", fp.generating},
                     {"stable", fp.stable}, {"leading_eigenvalue_real_part", fp.leading_eigenvalue_real_part}});
    }
    return dump(out);
  }, "p"_a, "omega1"_a);

  m.def("simulate",
        [](const brng::PhysicalParams& p, double dt, std::uint64_t n_steps, std::uint64_t burn_in_steps,
           std::uint64_t record_stride, std::uint64_t seed, const std::string& scheme, double noise_scale,
           bool full_complex) {
          brng::SimConfig cfg;
          cfg.dt = dt;
          cfg.n_steps = n_steps;
          cfg.burn_in_steps = burn_in_steps;
          cfg.record_stride = record_stride;
          cfg.seed = seed;
          cfg.scheme = brng::scheme_from_string(scheme);
          cfg.noise_scale = noise_scale;
          cfg.record_full_complex = full_complex;
          brng::Trajectory t;
          {
            py::gil_scoped_release release;
            t = brng::integrate(p, cfg);
          }
          const auto w = static_cast<py::ssize_t>(t.frame_width());
          py::array_t<double> data(std::vector<py::ssize_t>{static_cast<py::ssize_t>(t.size()), w},
                                   t.data.data());
          py::dict d;
          d["t0"] = t.t0;
          d["dt_effective"] = t.dt_effective;
          d["params_digest"] = t.params_digest;
          d["data"] = data;
          return d;
        },
        "p"_a, "dt"_a = 1e-12, "n_steps"_a, "burn_in_steps"_a = 0, "record_stride"_a = 1, "seed"_a = 0,
        "scheme"_a = "stochastic-heun", "noise_scale"_a = 1.0, "full_complex"_a = false,
        "Integrate and return {'data': frames x (3 | 6), 't0', 'dt_effective', 'params_digest'}");

  m.def("empirical_distribution", [](py::array_t<double> samples, std::size_t n_bins) {
    const auto d = brng::empirical_distribution(to_vector(samples), n_bins);
    py::dict out;
    out["bin_edges"] = to_array(d.bin_edges);
    out["pdf"] = to_array(d.pdf);
    out["cdf"] = to_array(d.cdf);
    out["n_samples"] = d.n_samples;
    return out;
  }, "samples"_a, "n_bins"_a = 200);
  m.def("analyze_modes", [](py::array_t<double> a2_sq, std::size_t n_bins) {
    const auto r = brng::analyze_modes(to_vector(a2_sq), n_bins);
    return dump({{"bimodal", r.bimodal}, {"lower_mode", r.lower_mode}, {"upper_mode", r.upper_mode},
                 {"pdf_minimum", r.pdf_minimum}});
  }, "a2_sq"_a, "n_bins"_a = 200);
  m.def("find_boundary", [](py::array_t<double> a2_sq, const std::string& strategy) {
    return brng::find_boundary(to_vector(a2_sq), brng::boundary_strategy_from_string(strategy));
  }, "a2_sq"_a, "strategy"_a = "balance-median");
  m.def("occupancy", [](py::array_t<double> a2_sq, double boundary) {
    const auto o = brng::occupancy_probabilities(to_vector(a2_sq), boundary);
    return dump({{"p_ng", o.p_ng}, {"p_g", o.p_g}});
  });
  m.def("dwell_times",
        [](py::array_t<double> a2_sq, double sample_interval, double boundary, double hysteresis,
           std::optional<double> mode_separation, std::size_t min_transitions) {
          brng::DwellOptions o;
          o.hysteresis_fraction = hysteresis;
          o.mode_separation = mode_separation;
          o.min_transitions = min_transitions;
          return dump(brng::to_json(brng::dwell_times(to_vector(a2_sq), sample_interval, boundary, o)));
        },
        "a2_sq"_a, "sample_interval"_a, "boundary"_a, "hysteresis"_a = 0.25,
        "mode_separation"_a = py::none(), "min_transitions"_a = 20);

  m.def("evaluate_operating_point",
        [](const brng::PhysicalParams& p, double omega1, double omega2, std::uint64_t seed,
           const std::string& options) {
          const auto e = evaluation_from(json::parse(options.empty() ? "{}" : options));
          py::gil_scoped_release release;
          return dump(brng::to_json(brng::evaluate_operating_point(p, omega1, omega2, seed, e)));
        },
        "p"_a, "omega1"_a, "omega2"_a = 0.0, "seed"_a = 0, "options"_a = "{}");
  m.def("balance_pump",
        [](const brng::PhysicalParams& p, double omega2, std::optional<std::pair<double, double>> bracket,
           std::uint64_t seed, const std::string& options) {
          const json o = json::parse(options);
          brng::BalanceOptions bo;
          bo.evaluation = evaluation_from(o);
          bo.bisection.tol_p = o.value("tol_p", bo.bisection.tol_p);
          bo.bisection.max_evaluations = o.value("max_evaluations", bo.bisection.max_evaluations);
          py::gil_scoped_release release;
          return dump(brng::to_json(brng::balance_pump(p, omega2, bracket, seed, bo)));
        });
  m.def("sampling_frequency", [](double tau_ng, double tau_g, double divisor) {
    brng::DwellStats d;
    d.tau_ng = tau_ng;
    d.tau_g = tau_g;
    d.balanced = true;
    brng::SamplingOptions o;
    o.divisor = divisor;
    return brng::sampling_frequency(d, o);
  }, "tau_ng"_a, "tau_g"_a, "divisor"_a = 4.0);
  m.def("generate_bits",
        [](const brng::PhysicalParams& p, const std::string& balance, std::uint64_t n_bits,
           std::uint64_t seed, const std::string& options) {
          const brng::BalancePoint bp = brng::balance_point_from_json(json::parse(balance));
          const json o = json::parse(options);
          brng::BitGenOptions go;
          go.dt = o.value("dt", go.dt);
          go.noise_scale = o.value("noise_scale", go.noise_scale);
          go.sampling.divisor = o.value("divisor", go.sampling.divisor);
          if (o.contains("f_s")) go.f_s = o.at("f_s").get<double>();
          if (o.contains("burn_in_time")) go.burn_in_time = o.at("burn_in_time").get<double>();
          brng::PhysicalParams q = p;
          q.omega_pump1 = bp.omega1_star;
          q.omega_pump2 = bp.omega2;
          brng::BitStream bs;
          {
            py::gil_scoped_release release;
            bs = brng::generate_bits(q, bp, n_bits, seed, go);
          }
          return py::make_tuple(to_array(bs.bits), dump(brng::to_json(bs)));
        });

  m.def("export_bits", [](const std::string& path, py::array_t<std::uint8_t> bits, const std::string& format,
                          const std::string& meta) {
    brng::BitStream bs;
    bs.bits = to_bits(bits);
    const json j = json::parse(meta);
    bs.f_s = j.value("f_s", 0.0);
    bs.boundary = j.value("boundary", 0.0);
    bs.seed = j.value("seed", std::uint64_t{0});
    bs.refresh_summary();
    brng::export_bits(path, bs, brng::bit_format_from_string(format));
  });
  m.def("import_bits", [](const std::string& path) {
    const brng::BitStream bs = brng::import_bits(path);
    return py::make_tuple(to_array(bs.bits), dump(brng::to_json(bs)));
  });

  m.def("nist_test", [](py::array_t<std::uint8_t> bits, const std::string& test, double alpha) {
    return dump(brng::to_json(brng::run_test(to_bits(bits), test_from(test), {}, alpha)));
  }, "bits"_a, "test"_a, "alpha"_a = 0.01);
  m.def("nist_suite", [](py::array_t<std::uint8_t> bits, double alpha, unsigned threads) {
    const auto v = to_bits(bits);
    py::gil_scoped_release release;
    return dump(brng::to_json(brng::run_suite(v, alpha, {}, threads)));
  }, "bits"_a, "alpha"_a = 0.01, "threads"_a = 1);
  m.def("nist_table", [](py::array_t<std::uint8_t> bits, double alpha) {
    return brng::format_table(brng::run_suite(to_bits(bits), alpha));
  }, "bits"_a, "alpha"_a = 0.01);
}
