#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "brng/config_io.hpp"
#include "cli/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result brng_run(std::vector<std::string> args) {
  args.insert(args.begin(), "brng");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = brng::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "brng_unit_cli" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

json reference_block() {
  return {{"gamma1", 0.191}, {"gamma2", 0.191}, {"gamma_b", 1.2},  {"domega1", 1.58},
          {"domega2", -10.59}, {"omega_b", 12.17}, {"g", 0.0159}, {"nbar", 513},
          {"omega_pump1", {{"relative_to", "omega_th"}, {"factor", 0.8}}}, {"omega_pump2", 0}};
}

fs::path write_config(const fs::path& dir, const json& cfg) {
  const fs::path p = dir / "cfg.json";
  std::ofstream(p) << cfg.dump(2);
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("analyze exit codes") {
    const fs::path dir = fresh_dir("analyze");
    const auto ok = brng_run({"analyze", "--config", write_config(dir, {{"params", reference_block()}}).string(),
                              "--out", (dir / "ok").string()});
    CHECK(ok.code == 0);
    const json a = brng::read_json_file(dir / "ok" / "analyze.json");
    CHECK(a.at("thresholds").at("omega_th").get<double>() == doctest::Approx(72.519548376112947).epsilon(1e-9));
    CHECK(a.at("regime_satisfied").get<bool>());
    CHECK(fs::exists(dir / "ok" / "analyze.manifest.json"));

    json soft = reference_block();
    soft["domega1"] = 0.0;
    const auto regime = brng_run({"analyze", "--config", write_config(dir, {{"params", soft}}).string(), "--out",
                                  (dir / "soft").string()});
    CHECK(regime.code == 2);

    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << "{\n  \"params\": {\n    \"gamma1\": ,\n  }\n}\n";
    const auto malformed = brng_run({"analyze", "--config", bad.string(), "--out", (dir / "bad").string()});
    CHECK(malformed.code == 1);
    CHECK(malformed.err.find("bad.json:3") != std::string::npos);

    CHECK(brng_run({"analyze", "--out", dir.string()}).code == 1);      // no config
    CHECK(brng_run({"frobnicate"}).code == 1);
    CHECK(brng_run({"--version"}).code == 0);
    CHECK(brng_run({"--help"}).code == 0);
  }

  TEST_CASE("nist flags a constant stream") {
    const fs::path dir = fresh_dir("nist");
    std::ofstream(dir / "zeros.txt") << std::string(100'000, '0');
    const auto r = brng_run({"nist", "--input", (dir / "zeros.txt").string(), "--out", dir.string()});
    CHECK(r.code == 3);
    const json j = brng::read_json_file(dir / "nist.json");
    CHECK_FALSE(j.at("overall_pass").get<bool>());
    CHECK(fs::exists(dir / "nist.txt"));
  }

  TEST_CASE("report collects the run") {
    const fs::path dir = fresh_dir("report");
    const fs::path cfg = write_config(dir, {{"params", reference_block()}});
    REQUIRE(brng_run({"analyze", "--config", cfg.string(), "--out", dir.string()}).code == 0);
    std::ofstream(dir / "zeros.txt") << std::string(20'000, '0');
    REQUIRE(brng_run({"nist", "--input", (dir / "zeros.txt").string(), "--out", dir.string()}).code == 3);
    const auto r = brng_run({"report", "--out", dir.string(), "--format", "svg"});
    CHECK(r.code == 0);
    const json rep = brng::read_json_file(dir / "report.json");
    const json a = brng::read_json_file(dir / "analyze.json");
    CHECK(rep.at("sections").at("analyze").at("thresholds") == a.at("thresholds"));
    CHECK(rep.at("sections").at("nist").at("overall_pass") == false);
    CHECK(fs::exists(dir / "fig_nist.svg"));
  }

  TEST_CASE("manifest reruns reproduce the outputs") {
    const fs::path dir = fresh_dir("manifest");
    json cfg{{"params", reference_block()},
             {"master_seed", 3},
             {"sim", {{"dt", 1e-12}, {"duration", 2e-8}, {"record_stride", 10}, {"burn_in_time", 1e-9}}}};
    REQUIRE(brng_run({"simulate", "--config", write_config(dir, cfg).string(), "--out", (dir / "a").string()}).code == 0);
    const fs::path manifest = dir / "a" / "simulate.manifest.json";
    const json m = brng::read_json_file(manifest);
    CHECK(m.at("master_seed") == 3);
    CHECK(m.at("exit_code") == 0);
    REQUIRE(brng_run({"simulate", "--config", manifest.string(), "--out", (dir / "b").string()}).code == 0);
    const json m2 = brng::read_json_file(dir / "b" / "simulate.manifest.json");
    CHECK(m2.at("config_digest") == m.at("config_digest"));
    auto bytes = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    };
    CHECK(bytes(dir / "a" / "trajectory.bin") == bytes(dir / "b" / "trajectory.bin"));

    // the seed flag overrides the config
    REQUIRE(brng_run({"simulate", "--config", manifest.string(), "--seed", "4", "--out", (dir / "c").string()}).code == 0);
    CHECK(bytes(dir / "a" / "trajectory.bin") != bytes(dir / "c" / "trajectory.bin"));
  }

  TEST_CASE("thread resolution") {
    CHECK(brng::cli::resolve_threads(3u) == 3);
    CHECK(brng::cli::resolve_threads(0u) == 1);
    CHECK(brng::cli::resolve_threads(std::nullopt) >= 1);
  }
}
