// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and a
// summary line; --json writes the measured values. The process exits 0 once
// every criterion has been evaluated, unless --strict is given, in which case
// the exit code is the number of failed criteria.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "brng/bitgen.hpp"
#include "brng/calibrate.hpp"
#include "brng/config_io.hpp"
#include "brng/nist.hpp"
#include "brng/params.hpp"
#include "brng/rng.hpp"
#include "brng/sde.hpp"
#include "brng/steady_state.hpp"
#include "test_data.hpp"

using namespace brng;
using nlohmann::json;

namespace {

constexpr std::uint64_t kMasterSeed = 7;
constexpr std::uint64_t kSweepSeed = 11;
constexpr std::uint64_t kRefineStream = 0x726566;
constexpr std::uint64_t kGenerateStream = 0x67656e;

std::string sci(double v, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

bool within_rel(double got, double want, double tol) { return std::abs(got - want) <= tol * std::abs(want); }

struct Verdict {
  bool pass = false;
  std::string detail;
  json values = json::object();
};

// ---- AC1 / AC4 -------------------------------------------------------------

Verdict closed_forms() {
  // 40-digit evaluations of the defining expressions, 2pi GHz
  const PhysicalParams p = reference_params();
  const DerivedRates d = derived_rates(p);
  const Thresholds t = closed_form_thresholds(p);
  const RegimeReport r = regime_report(p);
  const std::vector<std::tuple<std::string, double, double>> checks = {
      {"delta_omega", d.delta_omega / kAngularGHz, 10.806951833213515},
      {"Delta2", d.Delta2 / kAngularGHz, 0.21695183321351546},
      {"Delta_b", d.Delta_b / kAngularGHz, 1.3630481667864845},
      {"J_b", t.j_b, 1211.5932774706476},
      {"sqrt(gamma1 Gamma)", r.hard_excitation_bound / kAngularGHz, 0.51544252831911338},
      {"jump bound", r.jump_visibility_bound / kAngularGHz, 1.1000856445240789},
      {"criterion ratio", r.criterion_ratio, 3.5550431731586305},
  };
  Verdict v;
  double worst = 0.0;
  for (const auto& [name, got, want] : checks) {
    const double e = std::abs(got - want) / std::abs(want);
    worst = std::max(worst, e);
    v.values[name] = got;
  }
  v.pass = worst <= 1e-6;
  v.values["max_rel_error"] = worst;
  v.detail = "7 closed-form values, max relative error " + sci(worst, 2) + " (tol 1e-6)";
  return v;
}

Verdict branch_identities() {
  const PhysicalParams p = reference_params();
  const Thresholds t = closed_form_thresholds(p);
  const DerivedRates d = derived_rates(p);
  const BranchIntensities at_ex = generating_branch(p, t.omega_ex);
  const double e_jump = std::abs(at_ex.b_sq - t.j_b) / t.j_b;
  const double offset = (p.domega1 * d.Delta2 - p.gamma1 * p.gamma2) / (p.g * p.g);
  double e_ratio = 0.0;
  for (double f : {1.001, 1.05, 1.2, 1.5}) {
    const BranchIntensities bi = generating_branch(p, f * t.omega_ex);
    const double ratio = (bi.a2_sq - p.gamma_b / p.gamma2 * offset) / (bi.b_sq - offset);
    e_ratio = std::max(e_ratio, std::abs(ratio - p.gamma_b / p.gamma2) / (p.gamma_b / p.gamma2));
  }
  Verdict v;
  v.pass = e_jump <= 1e-9 && e_ratio <= 1e-9;
  v.values = {{"b_sq_at_omega_ex", at_ex.b_sq}, {"j_b", t.j_b}, {"jump_rel_error", e_jump},
              {"ratio_rel_error", e_ratio}};
  v.detail = "|b|^2(Omega_ex) = J_b to " + sci(e_jump, 2) + ", first-term ratio gamma_b/gamma2 to " +
             sci(e_ratio, 2) + " (tol 1e-9)";
  return v;
}

// ---- AC2 -------------------------------------------------------------------

struct Thermal {
  double mean_b_sq = 0.0;
  double tau_c = 0.0;
  double correlation_times = 0.0;
  std::vector<std::complex<double>> acf;
};

Thermal thermalize(std::uint64_t seed) {
  PhysicalParams p = reference_params();
  p.g = 0.0;
  p.omega_pump1 = p.omega_pump2 = 0.0;
  SimConfig cfg;
  cfg.dt = 1e-12;
  cfg.record_stride = 10;
  cfg.burn_in_steps = 20'000;
  const double t_c = 1.0 / p.gamma_b;
  const auto steps = static_cast<std::uint64_t>(std::ceil(1.0e6 * t_c / cfg.dt));
  cfg.n_steps = cfg.burn_in_steps + steps;
  cfg.seed = seed;
  cfg.record_full_complex = true;

  const std::size_t max_lag = 30;  // 300 ps, ~2.3 correlation times
  std::deque<std::complex<double>> ring;
  std::vector<std::complex<double>> acc(max_lag + 1);
  std::vector<std::uint64_t> cnt(max_lag + 1, 0);
  double sum = 0.0;
  std::uint64_t n = 0;
  integrate_stream(p, cfg, [&](std::span<const double> f) {
    const std::complex<double> b(f[4], f[5]);
    sum += std::norm(b);
    ++n;
    ring.push_front(b);
    if (ring.size() > max_lag + 1) ring.pop_back();
    for (std::size_t k = 0; k < ring.size(); ++k) {
      acc[k] += b * std::conj(ring[k]);
      ++cnt[k];
    }
  });
  Thermal th;
  th.mean_b_sq = sum / static_cast<double>(n);
  th.correlation_times = static_cast<double>(steps) * cfg.dt / t_c;
  th.acf.resize(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) th.acf[k] = acc[k] / static_cast<double>(cnt[k]);
  // least-squares slope of ln|C(s)/C(0)| through the origin over s <= 2 / gamma_b
  const double ds = cfg.dt * static_cast<double>(cfg.record_stride);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 1; k <= max_lag && k * ds <= 2.0 * t_c; ++k) {
    const double s = static_cast<double>(k) * ds;
    const double y = std::log(std::abs(th.acf[k]) / std::abs(th.acf[0]));
    sxy += s * y;
    sxx += s * s;
  }
  th.tau_c = -sxx / sxy;
  return th;
}

Verdict thermalization(const Thermal& th) {
  const double t_c = 1.0 / reference_params().gamma_b;
  Verdict v;
  const bool mean_ok = within_rel(th.mean_b_sq, 513.0, 0.05);
  const bool tau_ok = within_rel(th.tau_c, t_c, 0.10);
  v.pass = mean_ok && tau_ok && th.correlation_times >= 1e6;
  v.values = {{"mean_b_sq", th.mean_b_sq}, {"tau_c", th.tau_c}, {"one_over_gamma_b", t_c},
              {"correlation_times", th.correlation_times}};
  v.detail = "<|b|^2> = " + sci(th.mean_b_sq, 5) + " (513 +- 5%), tau_c = " + sci(th.tau_c * 1e12, 4) +
             " ps vs 1/gamma_b = " + sci(t_c * 1e12, 4) + " ps (+-10%), " + sci(th.correlation_times, 3) +
             " correlation times";
  return v;
}

// ---- AC3 -------------------------------------------------------------------

Verdict fixed_point_oracle() {
  PhysicalParams p = reference_params();
  const auto w = bistable_window_numeric(p);
  Verdict v;
  if (!w) {
    v.detail = "no numerical bistable window";
    return v;
  }
  const double lo = w->omega_lo, hi = w->omega_hi;
  const std::vector<double> pumps = {0.9 * lo, lo + 0.2 * (hi - lo), 0.5 * (lo + hi), lo + 0.8 * (hi - lo),
                                     1.1 * hi};
  auto endpoint = [&](double omega1, const ModeState& init) {
    PhysicalParams q = p;
    q.omega_pump1 = omega1;
    SimConfig cfg;
    cfg.noise_scale = 0.0;
    cfg.n_steps = 3'000'000;  // 3 us, > 3000 / gamma1
    cfg.record_stride = cfg.n_steps;
    cfg.initial = init;
    const Trajectory t = integrate(q, cfg);
    return std::pair{t.intensity(0, 1), t.intensity(0, 2)};
  };
  auto matches = [](std::pair<double, double> got, const FixedPoint& fp) {
    const double a2 = std::norm(fp.state.a2), b2 = std::norm(fp.state.b);
    if (!fp.generating) return got.first < 1e-6 && got.second < 1e-6;
    return within_rel(got.first, a2, 1e-3) && within_rel(got.second, b2, 1e-3);
  };

  bool all = true;
  int bistable = 0, inside = 0;
  json rows = json::array();
  for (double omega1 : pumps) {
    const auto fps = steady_states_numeric(p, omega1);
    const FixedPoint *off = nullptr, *on = nullptr;
    for (const auto& fp : fps) {
      if (!fp.stable) continue;
      (fp.generating ? on : off) = &fp;
    }
    const bool in_window = omega1 > lo && omega1 < hi;
    inside += in_window;
    // origin start with a small seed in a2 so the generating branch is reachable
    const auto from_origin = endpoint(omega1, ModeState{{}, cplx(1e-3, 0.0), {}});
    const FixedPoint* expect_origin = omega1 < hi ? off : on;
    bool ok = expect_origin && matches(from_origin, *expect_origin);
    json row{{"omega1_over_omega_th", omega1 / closed_form_thresholds(p).omega_th},
             {"in_window", in_window},
             {"origin_endpoint", {from_origin.first, from_origin.second}}};
    if (in_window) {
      ok = ok && on != nullptr;
      if (on) {
        const ModeState kick{on->state.a1, 0.7 * on->state.a2, 0.7 * on->state.b};
        const auto from_kick = endpoint(omega1, kick);
        const bool kick_ok = matches(from_kick, *on);
        row["kicked_endpoint"] = {from_kick.first, from_kick.second};
        ok = ok && kick_ok;
        bistable += kick_ok && matches(from_origin, *off);
      }
    }
    if (on) row["generating_fixed_point"] = {std::norm(on->state.a2), std::norm(on->state.b)};
    row["pass"] = ok;
    rows.push_back(row);
    all = all && ok;
  }
  v.pass = all && bistable == inside && inside > 0;
  v.values = {{"omega_lo", lo}, {"omega_hi", hi}, {"pumps", rows}};
  v.detail = "5 pumps across the window: endpoints within 0.1% of the stable fixed points; " +
             std::to_string(bistable) + "/" + std::to_string(inside) +
             " in-window pumps reach different states from origin and kicked starts";
  return v;
}

// ---- AC5 / AC7 / AC9 / AC10 ------------------------------------------------

BalanceOptions balance_options(double noise_scale = 1.0) {
  BalanceOptions bo;
  bo.evaluation.target_transitions = 2000;
  bo.evaluation.max_sim_time = 1e-4;
  bo.evaluation.noise_scale = noise_scale;
  bo.bisection.tol_p = 0.03;
  bo.bisection.max_evaluations = 12;
  return bo;
}

struct Calibration {
  BalancePoint bp;
  double refine_time = 0.0;
};

Calibration calibrate(std::uint64_t master, double noise_scale = 1.0) {
  const PhysicalParams p = reference_params();
  const double th = closed_form_thresholds(p).omega_th;
  const BalanceOptions bo = balance_options(noise_scale);
  const std::uint64_t seed = substream(master, 0);
  Calibration c;
  c.bp = balance_pump(p, 0.0, std::pair{0.76 * th, 0.84 * th}, seed, bo);
  c.refine_time = refine_time_for(c.bp);
  c.bp.boundary = refine_boundary(p, c.bp, c.refine_time, substream(seed, kRefineStream), bo.evaluation);
  return c;
}

Verdict balance(const Calibration& c) {
  const PhysicalParams p = reference_params();
  const double th = closed_form_thresholds(p).omega_th;
  const auto w = bistable_window_numeric(p);
  const BalancePoint& bp = c.bp;
  const double ratio = bp.omega1_star / th;
  const bool in_window = w && bp.omega1_star > w->omega_lo && bp.omega1_star < w->omega_hi;
  const bool p_ok = std::abs(bp.p_g_at_star - 0.5) <= 0.05;
  const bool n_ok = bp.n_transitions >= 200;
  const bool ratio_ok = std::abs(ratio - 0.783) <= 0.05;
  const double mean_tau = 0.5 * (bp.tau_ng + bp.tau_g);
  const bool tau_ok = std::abs(bp.tau_ng - bp.tau_g) <= 0.15 * mean_tau;
  Verdict v;
  v.pass = in_window && p_ok && n_ok && ratio_ok && tau_ok && bp.converged;
  v.values = to_json(bp);
  v.values["omega1_star_over_omega_th"] = ratio;
  v.values["refine_time"] = c.refine_time;
  std::ostringstream os;
  os << "Omega1*/Omega_th = " << sci(ratio, 4) << " (0.783 +- 0.05), p_g = " << sci(bp.p_g_at_star, 3)
     << " (0.5 +- 0.05), " << bp.n_transitions << " transitions (>= 200), tau_ng = " << sci(bp.tau_ng * 1e9, 4)
     << " ns, tau_g = " << sci(bp.tau_g * 1e9, 4) << " ns (within 15%)" << (in_window ? "" : ", OUTSIDE window");
  if (!ratio_ok) os << "; ratio outside tolerance";
  v.detail = os.str();
  return v;
}

BitGenOptions generation_options() {
  BitGenOptions o;  // dt 1 ps, stochastic Heun, divisor 4, default burn-in
  return o;
}

BitStream generate(const Calibration& c, std::uint64_t n_bits, std::uint64_t master) {
  return generate_bits(reference_params(), c.bp, n_bits, substream(master, kGenerateStream),
                       generation_options());
}

Verdict bit_balance(const BitStream& bs) {
  const std::size_t n = std::min<std::size_t>(20'000, bs.size());
  const auto ones = std::count(bs.bits.begin(), bs.bits.begin() + static_cast<std::ptrdiff_t>(n), 1);
  const double frac = static_cast<double>(ones) / static_cast<double>(n);
  const bool frac_ok = n == 20'000 && std::abs(frac - 0.5) <= 0.02;
  const bool rate_ok = bs.f_s >= 5e6 / 3.0 && bs.f_s <= 5e6 * 3.0;
  const std::vector<std::uint8_t> prefix(bs.bits.begin(), bs.bits.begin() + static_cast<std::ptrdiff_t>(n));
  Verdict v;
  v.pass = frac_ok && rate_ok;
  v.values = {{"n_bits", n}, {"ones_fraction", frac}, {"f_s", bs.f_s},
              {"lag1_autocorrelation", bit_autocorrelation(prefix)}};
  v.detail = std::to_string(n) + " bits: ones_fraction = " + sci(frac, 4) + " (0.5 +- 0.02), f_s = " +
             sci(bs.f_s / 1e6, 4) + " MHz (5 MHz within x3)";
  return v;
}

Verdict known_answers() {
  const json ref = read_json_file(testing::data_dir() / "nist_reference.json");
  double worst = 0.0;
  std::size_t compared = 0;
  for (const std::string name : {"e_1M", "mt_1M"}) {
    const auto bits = testing::read_raw_bits(testing::data_dir() / (name + ".bin"));
    for (auto t : kAllNistTests) {
      const TestResult r = run_test(bits, t);
      const auto expected = ref.at(name).at(test_id(t)).get<std::vector<double>>();
      if (r.p_values.size() != expected.size()) {
        worst = INFINITY;
        continue;
      }
      for (std::size_t i = 0; i < expected.size(); ++i, ++compared)
        worst = std::max(worst, std::abs(r.p_values[i] - expected[i]));
    }
  }
  Verdict v;
  v.pass = worst <= 1e-6;
  v.values = {{"p_values_compared", compared}, {"max_abs_difference", worst}};
  v.detail = "15 tests x 2 corpora of 1e6 bits, " + std::to_string(compared) +
             " P-values, max |diff| = " + sci(worst, 2) + " (tol 1e-6)";
  return v;
}

std::string suite_summary(const SuiteReport& r) {
  std::ostringstream os;
  os << r.executed() << " executed, " << r.skipped.size() << " skipped";
  std::vector<std::string> failed;
  for (const auto& t : r.results)
    if (!t.passed) failed.push_back(display_name(t.test) + " (P = " + sci(t.worst_p, 3) + ")");
  if (!failed.empty()) {
    os << ", failed:";
    for (const auto& f : failed) os << ' ' << f;
  }
  return os.str();
}

Verdict randomness(const BitStream& bs, unsigned threads, std::ostream& info) {
  const std::vector<std::uint8_t> bits(bs.bits.begin(), bs.bits.begin() + 100'000);
  const SuiteReport r = run_suite(bits, 0.01, {}, threads);
  Verdict v;
  v.pass = r.overall_pass;
  v.values = to_json(r);
  v.detail = "1e5 bits at the calibrated point: " + suite_summary(r);

  // Diagnostic only: the same stream at twice the sampling interval.
  std::vector<std::uint8_t> every2;
  for (std::size_t i = 1; i < bits.size(); i += 2) every2.push_back(bits[i]);
  const SuiteReport r2 = run_suite(every2, 0.01, {}, threads);
  v.values["diagnostic_every_second_bit"] = to_json(r2);
  info << "     info: lag-1 autocorrelation " << sci(bit_autocorrelation(bits), 3)
       << "; every second bit (5e4 bits, lag-1 " << sci(bit_autocorrelation(every2), 3)
       << "): " << suite_summary(r2) << (r2.overall_pass ? ", PASS" : ", FAIL") << "\n";

  if (bs.size() >= 396'308) {
    const std::vector<std::uint8_t> full(bs.bits.begin(), bs.bits.begin() + 396'308);
    const SuiteReport rl = run_suite(full, 0.01, {}, threads);
    v.values["long_396308"] = to_json(rl);
    info << "     info: 396,308 bits: " << suite_summary(rl) << (rl.overall_pass ? ", PASS" : ", FAIL") << "\n";
  }
  return v;
}

// ---- AC6 -------------------------------------------------------------------

Verdict seed_control(unsigned threads, std::ostream& info) {
  const PhysicalParams p = reference_params();
  const double th = closed_form_thresholds(p).omega_th;
  GridSpec g{GridSpec::linspace(0.74 * th, 0.84 * th, 11), GridSpec::linspace(0.0, 0.08 * th, 5)};
  EvaluationOptions e;
  e.target_transitions = 300;
  e.max_sim_time = 4e-5;
  const CalibrationMap m = sweep_maps(p, g, kSweepSeed, e, threads);
  const LocusResult locus = balance_locus(m);
  Verdict v;
  v.values = {{"locus", to_json(locus)}};
  const auto& pts = locus.points;
  if (pts.size() < 2) {
    v.detail = "balance locus has " + std::to_string(pts.size()) + " point(s)";
    return v;
  }
  // non-increasing within two combined standard errors
  bool monotone = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << (i ? ", " : "") << sci(pts[i].omega2 / th, 2) << ":" << sci(pts[i].tau * 1e9, 3);
    if (i > 0) {
      const double slack = 2.0 * std::hypot(pts[i].tau_stderr, pts[i - 1].tau_stderr);
      monotone = monotone && pts[i].tau <= pts[i - 1].tau + slack;
    }
  }
  const double drop = pts.front().tau / pts.back().tau;
  const bool full_range = pts.front().omega2 == g.omega2.front() && pts.back().omega2 == g.omega2.back();
  v.pass = monotone && drop >= 2.0 && full_range;
  v.values["tau_drop"] = drop;
  v.detail = "tau along the locus non-increasing: " + std::string(monotone ? "yes" : "no") + ", drop x" +
             sci(drop, 3) + " (>= 2) over " + std::to_string(pts.size()) + "/" +
             std::to_string(g.omega2.size()) + " omega2 rows";
  info << "     info: omega2/Omega_th:tau[ns] " << os.str() << "\n";
  for (const auto& n : locus.notes) info << "     info: " << n << "\n";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria AC1-AC10"};
  std::string only, json_path;
  bool strict = false;
  app.add_option("--only", only, "comma-separated criterion numbers, e.g. 1,4,8");
  app.add_option("--json", json_path, "write measured values to this file");
  app.add_flag("--strict", strict, "exit with the number of failed criteria");
  CLI11_PARSE(app, argc, argv);

  std::set<int> selected;
  if (only.empty()) {
    for (int i = 1; i <= 10; ++i) selected.insert(i);
  } else {
    std::stringstream ss(only);
    for (std::string tok; std::getline(ss, tok, ',');) selected.insert(std::stoi(tok));
  }
  const bool long_run = std::getenv("BRNG_LONG") != nullptr;
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  json report = json::object();
  int passed = 0, failed = 0;
  std::ostringstream info;
  auto record = [&](int id, const std::function<Verdict()>& f) {
    if (!selected.count(id)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = f();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "AC" << id << (id < 10 ? "  " : " ") << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << "  ["
              << sci(secs, 3) << " s]\n"
              << info.str() << std::flush;
    info.str("");
    (v.pass ? passed : failed) += 1;
    v.values["pass"] = v.pass;
    v.values["seconds"] = secs;
    report["AC" + std::to_string(id)] = v.values;
  };

  std::optional<Thermal> thermal;
  std::optional<Calibration> calib;
  std::optional<BitStream> bits;
  auto need_calib = [&]() -> const Calibration& {
    if (!calib) calib = calibrate(kMasterSeed);
    return *calib;
  };
  auto need_bits = [&]() -> const BitStream& {
    if (!bits) bits = generate(need_calib(), long_run ? 396'308 : 100'000, kMasterSeed);
    return *bits;
  };

  record(1, closed_forms);
  record(2, [&] {
    thermal = thermalize(kMasterSeed);
    return thermalization(*thermal);
  });
  record(3, fixed_point_oracle);
  record(4, branch_identities);
  record(5, [&] {
    Verdict v = balance(need_calib());
    const double ratio = need_calib().bp.omega1_star / closed_form_thresholds(reference_params()).omega_th;
    if (std::abs(ratio - 0.783) > 0.05) {
      // Only the ratio may be rescued, and only by the noise multiplier.
      for (double s : {0.5, 2.0}) {
        const Calibration alt = calibrate(kMasterSeed, s);
        const double r = alt.bp.omega1_star / closed_form_thresholds(reference_params()).omega_th;
        info << "     info: noise_scale " << s << ": Omega1*/Omega_th = " << sci(r, 4) << "\n";
        v.values["noise_scale_" + sci(s, 2)] = r;
      }
    }
    return v;
  });
  record(6, [&] { return seed_control(threads, info); });
  record(7, [&] { return bit_balance(need_bits()); });
  record(8, known_answers);
  record(9, [&] { return randomness(need_bits(), threads, info); });
  record(10, [&] {
    Verdict v;
    std::vector<std::string> parts;
    bool ok = true;
    if (thermal) {
      const Thermal again = thermalize(kMasterSeed);
      const bool same = again.mean_b_sq == thermal->mean_b_sq && again.acf == thermal->acf;
      ok = ok && same;
      parts.push_back(std::string("AC2 ") + (same ? "identical" : "DIFFERENT"));
    }
    if (calib) {
      const Calibration again = calibrate(kMasterSeed);
      const bool same = to_json(again.bp).dump() == to_json(calib->bp).dump();
      ok = ok && same;
      parts.push_back(std::string("AC5 ") + (same ? "identical" : "DIFFERENT"));
    }
    if (bits) {
      const BitStream again = generate(*calib, 20'000, kMasterSeed);
      const bool same = std::equal(again.bits.begin(), again.bits.end(), bits->bits.begin()) &&
                        again.f_s == bits->f_s;
      ok = ok && same;
      parts.push_back(std::string("AC7 ") + (same ? "identical" : "DIFFERENT"));
    }
    v.pass = ok && parts.size() == 3;
    v.detail = "rerun with master seed " + std::to_string(kMasterSeed) + ":";
    for (const auto& s : parts) v.detail += " " + s + ";";
    if (parts.size() < 3) v.detail += " (needs AC2, AC5 and AC7 in the same run)";
    return v;
  });

  std::cout << "acceptance: " << passed + failed << " criteria evaluated, " << passed << " PASS, " << failed
            << " FAIL\n";
  if (!json_path.empty()) std::ofstream(json_path) << report.dump(2) << "\n";
  return strict ? failed : 0;
}
