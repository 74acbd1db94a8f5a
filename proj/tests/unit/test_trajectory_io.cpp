#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "brng/error.hpp"
#include "brng/params.hpp"
#include "brng/trajectory_io.hpp"

using namespace brng;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "brng_unit_trajectory_io";
  fs::create_directories(dir);
  return dir / name;
}

Trajectory sample(bool full) {
  PhysicalParams p = reference_params();
  p.omega_pump1 = 0.8 * closed_form_thresholds(p).omega_th;
  SimConfig cfg;
  cfg.n_steps = 3000;
  cfg.burn_in_steps = 500;
  cfg.record_stride = 10;
  cfg.seed = 17;
  cfg.record_full_complex = full;
  return integrate(p, cfg);
}

}  // namespace

TEST_SUITE("trajectory_io") {
  TEST_CASE("binary round trip") {
    for (bool full : {false, true}) {
      const Trajectory t = sample(full);
      const fs::path path = scratch(full ? "full.bin" : "intensity.bin");
      write_trajectory(path, t);
      const Trajectory r = read_trajectory(path);
      CHECK(r.full_complex == full);
      CHECK(r.size() == 250);
      CHECK(r.data == t.data);
      CHECK(r.t0 == t.t0);
      CHECK(r.dt_effective == t.dt_effective);
      CHECK(r.params_digest == t.params_digest);
    }
  }

  TEST_CASE("streaming writer matches the one-shot writer") {
    const Trajectory t = sample(false);
    const fs::path a = scratch("oneshot.bin"), b = scratch("streamed.bin");
    write_trajectory(a, t);
    {
      Trajectory meta = t;
      meta.data.clear();
      TrajectoryWriter w(b, meta, 7);  // small buffer exercises flushing
      for (std::size_t i = 0; i < t.size(); ++i) w.write(t.frame(i));
      CHECK(w.frames_written() == t.size());
      const double wrong[2] = {0.0, 0.0};
      CHECK_THROWS_AS(w.write(wrong), DomainError);
    }
    CHECK(read_trajectory(b).data == t.data);
    CHECK(fs::file_size(a) == fs::file_size(b));
  }

  TEST_CASE("csv export") {
    const Trajectory t = sample(true);
    const fs::path path = scratch("t.csv");
    write_trajectory_csv(path, t);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,|a1|^2,|a2|^2,|b|^2");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
      if (rows == 3) {
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        CHECK(std::stod(cell) == doctest::Approx(t.time(3)));
        std::getline(ls, cell, ',');
        CHECK(std::stod(cell) == doctest::Approx(t.intensity(3, 0)).epsilon(1e-12));
      }
      ++rows;
    }
    CHECK(rows == t.size());
  }

  TEST_CASE("corrupt files are rejected") {
    const fs::path bad = scratch("bad.bin");
    std::ofstream(bad) << "not a trajectory";
    CHECK_THROWS_AS(read_trajectory(bad), IoError);
    CHECK_THROWS_AS(read_trajectory(scratch("missing.bin")), IoError);

    const Trajectory t = sample(false);
    const fs::path cut = scratch("cut.bin");
    write_trajectory(cut, t);
    fs::resize_file(cut, fs::file_size(cut) - 5);
    CHECK_THROWS_AS(read_trajectory(cut), IoError);
  }
}
