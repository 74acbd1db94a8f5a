#include "brng/trajectory_io.hpp"

#include <bit>
#include <cstring>
#include <iomanip>
#include <nlohmann/json.hpp>

#include "brng/error.hpp"

namespace brng {
namespace {

constexpr char kMagic[8] = {'B', 'R', 'N', 'G', 'T', 'R', 'J', '1'};

static_assert(std::endian::native == std::endian::little,
              "trajectory files are written in host byte order");

nlohmann::json header_of(const Trajectory& t) {
  nlohmann::json h;
  h["format"] = "brng-trajectory";
  h["version"] = 1;
  h["params_digest"] = t.params_digest;
  h["t0"] = t.t0;
  h["dt_effective"] = t.dt_effective;
  h["endianness"] = "little";
  h["dtype"] = "float64";
  h["layout"] = t.full_complex
                    ? nlohmann::json::array({"re_a1", "im_a1", "re_a2", "im_a2", "re_b", "im_b"})
                    : nlohmann::json::array({"abs2_a1", "abs2_a2", "abs2_b"});
  return h;
}

}  // namespace

TrajectoryWriter::TrajectoryWriter(const std::filesystem::path& path, const Trajectory& meta,
                                   std::size_t buffer_frames)
    : out_(path, std::ios::binary | std::ios::trunc),
      width_(meta.frame_width()),
      capacity_(std::max<std::size_t>(buffer_frames, 1) * meta.frame_width()) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  const std::string header = header_of(meta).dump();
  const std::uint64_t len = header.size();
  out_.write(kMagic, sizeof kMagic);
  out_.write(reinterpret_cast<const char*>(&len), sizeof len);
  out_.write(header.data(), static_cast<std::streamsize>(header.size()));
  buffer_.reserve(capacity_);
}

TrajectoryWriter::~TrajectoryWriter() {
  try {
    close();
  } catch (...) {
  }
}

void TrajectoryWriter::write(std::span<const double> frame) {
  if (frame.size() != width_) throw DomainError("frame width does not match the trajectory layout");
  buffer_.insert(buffer_.end(), frame.begin(), frame.end());
  ++frames_;
  if (buffer_.size() >= capacity_) flush();
}

void TrajectoryWriter::flush() {
  out_.write(reinterpret_cast<const char*>(buffer_.data()),
             static_cast<std::streamsize>(buffer_.size() * sizeof(double)));
  buffer_.clear();
  if (!out_) throw IoError("write failed");
}

void TrajectoryWriter::close() {
  if (!open_) return;
  open_ = false;
  flush();
  out_.close();
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  TrajectoryWriter w(path, traj);
  const std::size_t width = traj.frame_width();
  for (std::size_t i = 0; i < traj.size(); ++i)
    w.write(std::span<const double>(traj.data.data() + i * width, width));
  w.close();
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  std::uint64_t len = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw IoError(path.string() + ": not a trajectory file");
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw IoError(path.string() + ": truncated header");

  nlohmann::json h;
  try {
    h = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": bad header: " + e.what());
  }
  if (h.value("endianness", "") != "little" || h.value("dtype", "") != "float64")
    throw IoError(path.string() + ": unsupported sample encoding");

  Trajectory t;
  t.params_digest = h.value("params_digest", "");
  t.t0 = h.at("t0").get<double>();
  t.dt_effective = h.at("dt_effective").get<double>();
  t.full_complex = h.at("layout").size() == 6;

  const auto begin = in.tellg();
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::uint64_t>(in.tellg() - begin);
  const std::size_t frame_bytes = t.frame_width() * sizeof(double);
  if (bytes % frame_bytes != 0) throw IoError(path.string() + ": partial trailing frame");
  t.data.resize(bytes / sizeof(double));
  in.seekg(begin);
  in.read(reinterpret_cast<char*>(t.data.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw IoError(path.string() + ": read failed");
  return t;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "t,|a1|^2,|a2|^2,|b|^2\n" << std::setprecision(17);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << traj.time(i) << ',' << traj.intensity(i, 0) << ',' << traj.intensity(i, 1) << ','
        << traj.intensity(i, 2) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace brng
