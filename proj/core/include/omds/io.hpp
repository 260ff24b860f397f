#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "omds/frame.hpp"
#include "omds/microdoppler.hpp"
#include "omds/scene.hpp"

namespace omds {

/// Real-valued matrix as stored on disk (range-Doppler maps, spectrograms).
struct RealMatrix {
  std::vector<double> values;
  std::uint32_t rows = 0;
  std::uint64_t cols = 0;
};

// --- binary matrix container -------------------------------------------
//
// Little-endian header: magic "OMDS", u32 version = 1, u32 rows, u32 cols,
// u8 element type (0 = real32, 1 = complex64 as interleaved float32
// re/im), then the row-major payload. 17 header bytes total.

void write_matrix_bin(const std::filesystem::path& path, const FrameMatrix& m);
void write_matrix_bin(const std::filesystem::path& path, const RealMatrix& m);
FrameMatrix read_frame_matrix_bin(const std::filesystem::path& path);
RealMatrix read_real_matrix_bin(const std::filesystem::path& path);

// --- text formats --------------------------------------------------------

/// CSV, one matrix row per line. Complex entries are written as
/// interleaved re,im columns.
void write_matrix_csv(const std::filesystem::path& path, const FrameMatrix& m);
void write_matrix_csv(const std::filesystem::path& path, const RealMatrix& m);

/// Binary P5 grayscale of a dB spectrogram: [floor_db, 0] maps linearly to
/// [0, 255], Doppler on the vertical axis with 0 Hz centered (positive up),
/// time on the horizontal axis. Requires a dB-scaled spectrogram.
void write_spectrogram_pgm(const std::filesystem::path& path, const Spectrogram& spec);

// --- motion interchange ---------------------------------------------------

/// Plain-text track table: mandatory header
/// `frame_index,time_s,joint_name,x_m,y_m,z_m`, one row per (frame, joint).
MotionTrack read_motion_track(const std::filesystem::path& path);
void write_motion_track(const std::filesystem::path& path, const MotionTrack& track);

/// Skeleton binding table: header
/// `name,kind,joint_a,joint_b,a_m,b_m,c_m,zeta`; `-` marks a single-joint
/// binding.
std::vector<Primitive> read_skeleton(const std::filesystem::path& path);
void write_skeleton(const std::filesystem::path& path,
                    std::span<const Primitive> primitives);

// --- manifest -------------------------------------------------------------

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

struct ManifestEntry {
  std::string name;
  std::uint64_t bytes = 0;
  std::uint64_t hash = 0;
};

/// One line per artifact: `<name> <bytes> fnv1a64:<16 hex digits>`. The
/// manifest file itself is not listed.
void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestEntry> entries);

/// Locale-independent shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace omds
