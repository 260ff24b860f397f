#include "omds/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace omds {

namespace {

constexpr char kMagic[4] = {'O', 'M', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kElemReal32 = 0;
constexpr std::uint8_t kElemComplex64 = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  const std::array<unsigned char, 4> b{
      static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
      static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  is.read(reinterpret_cast<char*>(b.data()), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) fail(ErrorCode::IoFailure, "cannot open for writing: " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) fail(ErrorCode::IoFailure, "cannot open for reading: " + path.string());
  return is;
}

void write_header(std::ostream& os, std::uint32_t rows, std::uint32_t cols,
                  std::uint8_t elem) {
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  put_u32(os, rows);
  put_u32(os, cols);
  os.put(static_cast<char>(elem));
}

struct Header {
  std::uint32_t rows;
  std::uint32_t cols;
  std::uint8_t elem;
};

Header read_header(std::istream& is, const std::filesystem::path& path) {
  char magic[4] = {};
  is.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    fail(ErrorCode::UnsupportedFormat, "not a matrix container: " + path.string());
  }
  if (get_u32(is) != kVersion) {
    fail(ErrorCode::UnsupportedFormat, "unsupported container version");
  }
  Header h{};
  h.rows = get_u32(is);
  h.cols = get_u32(is);
  h.elem = static_cast<std::uint8_t>(is.get());
  if (!is) fail(ErrorCode::IoFailure, "truncated header: " + path.string());
  return h;
}

std::vector<float> read_payload(std::istream& is, std::size_t count,
                                const std::filesystem::path& path) {
  std::vector<float> buf(count);
  is.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (!is) fail(ErrorCode::IoFailure, "truncated payload: " + path.string());
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  double v = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    fail(ErrorCode::IoFailure, "bad numeric field '" + s + "' in " + path.string());
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

void write_matrix_bin(const std::filesystem::path& path, const FrameMatrix& m) {
  auto os = open_out(path, true);
  write_header(os, m.rows(), static_cast<std::uint32_t>(m.cols()), kElemComplex64);
  std::vector<float> buf(m.size() * 2);
  for (std::size_t i = 0; i < m.size(); ++i) {
    buf[2 * i] = static_cast<float>(m.data()[i].real());
    buf[2 * i + 1] = static_cast<float>(m.data()[i].imag());
  }
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!os) fail(ErrorCode::IoFailure, "write failed: " + path.string());
}

void write_matrix_bin(const std::filesystem::path& path, const RealMatrix& m) {
  auto os = open_out(path, true);
  write_header(os, m.rows, static_cast<std::uint32_t>(m.cols), kElemReal32);
  std::vector<float> buf(m.values.size());
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    buf[i] = static_cast<float>(m.values[i]);
  }
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!os) fail(ErrorCode::IoFailure, "write failed: " + path.string());
}

FrameMatrix read_frame_matrix_bin(const std::filesystem::path& path) {
  auto is = open_in(path, true);
  const Header h = read_header(is, path);
  if (h.elem != kElemComplex64) {
    fail(ErrorCode::UnsupportedFormat, "expected a complex matrix: " + path.string());
  }
  FrameMatrix m(h.rows, h.cols);
  const auto buf = read_payload(is, m.size() * 2, path);
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.data()[i] = cplx{buf[2 * i], buf[2 * i + 1]};
  }
  return m;
}

RealMatrix read_real_matrix_bin(const std::filesystem::path& path) {
  auto is = open_in(path, true);
  const Header h = read_header(is, path);
  if (h.elem != kElemReal32) {
    fail(ErrorCode::UnsupportedFormat, "expected a real matrix: " + path.string());
  }
  RealMatrix m;
  m.rows = h.rows;
  m.cols = h.cols;
  const auto buf = read_payload(is, static_cast<std::size_t>(h.rows) * h.cols, path);
  m.values.assign(buf.begin(), buf.end());
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const FrameMatrix& m) {
  auto os = open_out(path, false);
  for (std::uint32_t n = 0; n < m.rows(); ++n) {
    for (std::uint64_t c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      const cplx& v = m.at(n, c);
      os << format_double(v.real()) << ',' << format_double(v.imag());
    }
    os << '\n';
  }
  if (!os) fail(ErrorCode::IoFailure, "write failed: " + path.string());
}

void write_matrix_csv(const std::filesystem::path& path, const RealMatrix& m) {
  auto os = open_out(path, false);
  for (std::uint32_t n = 0; n < m.rows; ++n) {
    for (std::uint64_t c = 0; c < m.cols; ++c) {
      if (c) os << ',';
      os << format_double(m.values[static_cast<std::size_t>(n) * m.cols + c]);
    }
    os << '\n';
  }
  if (!os) fail(ErrorCode::IoFailure, "write failed: " + path.string());
}

void write_spectrogram_pgm(const std::filesystem::path& path, const Spectrogram& spec) {
  if (!spec.db_scaled) {
    fail(ErrorCode::UnsupportedFormat, "PGM export needs a dB-scaled spectrogram");
  }
  if (spec.floor_db >= 0.0) {
    fail(ErrorCode::UnsupportedFormat, "dB floor must be negative for PGM mapping");
  }
  auto os = open_out(path, true);
  os << "P5\n" << spec.frames << ' ' << spec.doppler_bins << "\n255\n";
  std::vector<unsigned char> row(spec.frames);
  for (std::uint32_t j = 0; j < spec.doppler_bins; ++j) {
    // top image row = highest Doppler
    const std::uint32_t i = spec.doppler_bins - 1 - j;
    for (std::uint32_t m = 0; m < spec.frames; ++m) {
      const double scaled = (spec.at(i, m) - spec.floor_db) / (0.0 - spec.floor_db);
      const double clamped = std::min(1.0, std::max(0.0, scaled));
      row[m] = static_cast<unsigned char>(std::lround(clamped * 255.0));
    }
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!os) fail(ErrorCode::IoFailure, "write failed: " + path.string());
}

MotionTrack read_motion_track(const std::filesystem::path& path) {
  auto is = open_in(path, false);
  std::string line;
  if (!std::getline(is, line) ||
      split_csv_line(line) !=
          std::vector<std::string>{"frame_index", "time_s", "joint_name",
                                   "x_m", "y_m", "z_m"}) {
    fail(ErrorCode::IoFailure, "missing track header in " + path.string());
  }

  std::vector<std::string> joint_order;
  std::map<std::string, std::vector<Vec3>> series;
  std::vector<double> frame_times;
  std::uint64_t current_frame = 0;
  bool first_row = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) {
      fail(ErrorCode::IoFailure, "bad track row in " + path.string());
    }
    const auto frame = static_cast<std::uint64_t>(parse_double(f[0], path));
    const double t = parse_double(f[1], path);
    const Vec3 p{parse_double(f[3], path), parse_double(f[4], path),
                 parse_double(f[5], path)};
    if (first_row || frame != current_frame) {
      if (!first_row && frame != current_frame + 1) {
        fail(ErrorCode::IoFailure, "non-contiguous frame indices in " + path.string());
      }
      current_frame = frame;
      frame_times.push_back(t);
      first_row = false;
    }
    auto [it, inserted] = series.try_emplace(f[2]);
    if (inserted) joint_order.push_back(f[2]);
    it->second.push_back(p);
  }
  if (frame_times.size() < 2) {
    fail(ErrorCode::TooFewSamples, "track needs at least 2 frames: " + path.string());
  }

  const double dt = frame_times[1] - frame_times[0];
  if (dt <= 0.0) fail(ErrorCode::IoFailure, "non-increasing track times");
  for (std::size_t k = 1; k < frame_times.size(); ++k) {
    if (std::abs(frame_times[k] - frame_times[k - 1] - dt) > 1e-9 * dt + 1e-12) {
      fail(ErrorCode::IoFailure, "track sample times are not uniform");
    }
  }

  MotionTrack track;
  track.sample_rate = 1.0 / dt;
  for (const auto& name : joint_order) {
    track.joint_names.push_back(name);
    track.joints.push_back(series.at(name));
  }
  track.validate();
  return track;
}

void write_motion_track(const std::filesystem::path& path, const MotionTrack& track) {
  track.validate();
  auto os = open_out(path, false);
  os << "frame_index,time_s,joint_name,x_m,y_m,z_m\n";
  for (std::size_t k = 0; k < track.frame_count(); ++k) {
    const double t = static_cast<double>(k) / track.sample_rate;
    for (std::size_t j = 0; j < track.joints.size(); ++j) {
      const Vec3& p = track.joints[j][k];
      os << k << ',' << format_double(t) << ',' << track.joint_names[j] << ','
         << format_double(p.x) << ',' << format_double(p.y) << ','
         << format_double(p.z) << '\n';
    }
  }
  if (!os) fail(ErrorCode::IoFailure, "write failed: " + path.string());
}

std::vector<Primitive> read_skeleton(const std::filesystem::path& path) {
  auto is = open_in(path, false);
  std::string line;
  if (!std::getline(is, line) ||
      split_csv_line(line) !=
          std::vector<std::string>{"name", "kind", "joint_a", "joint_b",
                                   "a_m", "b_m", "c_m", "zeta"}) {
    fail(ErrorCode::IoFailure, "missing skeleton header in " + path.string());
  }
  std::vector<Primitive> prims;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) {
      fail(ErrorCode::IoFailure, "bad skeleton row in " + path.string());
    }
    Primitive p;
    p.name = f[0];
    if (f[1] == "ellipsoid") {
      p.kind = Primitive::Kind::Ellipsoid;
    } else if (f[1] == "sphere") {
      p.kind = Primitive::Kind::Sphere;
    } else {
      fail(ErrorCode::IoFailure, "unknown primitive kind '" + f[1] + "'");
    }
    p.joint_a = f[2];
    p.joint_b = f[3] == "-" ? "" : f[3];
    p.a = parse_double(f[4], path);
    p.b = parse_double(f[5], path);
    p.c = parse_double(f[6], path);
    p.zeta = parse_double(f[7], path);
    prims.push_back(std::move(p));
  }
  if (prims.empty()) {
    fail(ErrorCode::IoFailure, "skeleton file lists no primitives: " + path.string());
  }
  return prims;
}

void write_skeleton(const std::filesystem::path& path,
                    std::span<const Primitive> primitives) {
  auto os = open_out(path, false);
  os << "name,kind,joint_a,joint_b,a_m,b_m,c_m,zeta\n";
  for (const Primitive& p : primitives) {
    os << p.name << ','
       << (p.kind == Primitive::Kind::Sphere ? "sphere" : "ellipsoid") << ','
       << p.joint_a << ',' << (p.joint_b.empty() ? "-" : p.joint_b) << ','
       << format_double(p.a) << ',' << format_double(p.b) << ','
       << format_double(p.c) << ',' << format_double(p.zeta) << '\n';
  }
  if (!os) fail(ErrorCode::IoFailure, "write failed: " + path.string());
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  auto is = open_in(path, true);
  std::uint64_t h = 0xCBF29CE484222325ull;
  std::array<unsigned char, 65536> buf{};
  while (is) {
    is.read(reinterpret_cast<char*>(buf.data()), buf.size());
    const std::streamsize got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= buf[static_cast<std::size_t>(i)];
      h *= 0x100000001B3ull;
    }
  }
  return h;
}

void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestEntry> entries) {
  auto os = open_out(path, false);
  for (const ManifestEntry& e : entries) {
    os << e.name << ' ' << e.bytes << " fnv1a64:";
    std::array<char, 17> hex{};
    for (int i = 0; i < 16; ++i) {
      const auto nibble = static_cast<int>((e.hash >> (60 - 4 * i)) & 0xF);
      hex[static_cast<std::size_t>(i)] =
          static_cast<char>(nibble < 10 ? '0' + nibble : 'a' + nibble - 10);
    }
    os << hex.data() << '\n';
  }
  if (!os) fail(ErrorCode::IoFailure, "write failed: " + path.string());
}

}  // namespace omds
