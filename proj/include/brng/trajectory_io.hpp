#pragma once

// On-disk trajectory format:
//   "BRNGTRJ1"  8 bytes magic
//   u64 LE      length H of the JSON header
//   H bytes     JSON header (digest, t0, dt_effective, layout, endianness, dtype)
//   frames      little-endian float64, 3 or 6 values per frame
// The frame count follows from the file size. A CSV export with columns
// t,|a1|^2,|a2|^2,|b|^2 is provided for plotting.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>

#include "brng/sde.hpp"

namespace brng {

/// Streams frames to disk as they are produced. Keeps at most one buffer of
/// frames in memory.
class TrajectoryWriter {
 public:
  TrajectoryWriter(const std::filesystem::path& path, const Trajectory& meta,
                   std::size_t buffer_frames = 1 << 14);
  ~TrajectoryWriter();
  TrajectoryWriter(const TrajectoryWriter&) = delete;
  TrajectoryWriter& operator=(const TrajectoryWriter&) = delete;

  void write(std::span<const double> frame);
  void close();
  std::uint64_t frames_written() const { return frames_; }

 private:
  void flush();

  std::ofstream out_;
  std::size_t width_;
  std::size_t capacity_;
  std::vector<double> buffer_;
  std::uint64_t frames_ = 0;
  bool open_ = true;
};

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory(const std::filesystem::path& path);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

}  // namespace brng
