#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "omds/io.hpp"
#include "omds/rng.hpp"
#include "omds/scene.hpp"

using namespace omds;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  const fs::path dir = fs::temp_directory_path() / "omds_io_tests";
  fs::create_directories(dir);
  return dir;
}

std::vector<unsigned char> slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("binary container layout") {
  const fs::path path = tmp_dir() / "real2x2.bin";
  RealMatrix m;
  m.rows = 2;
  m.cols = 2;
  m.values = {1.0, 2.0, 3.0, 4.0};
  write_matrix_bin(path, m);

  const auto bytes = slurp(path);
  // 17-byte header (magic, version, rows, cols, element type) + 4 float32
  REQUIRE(bytes.size() == 17 + 16);
  CHECK(bytes[0] == 'O');
  CHECK(bytes[1] == 'M');
  CHECK(bytes[2] == 'D');
  CHECK(bytes[3] == 'S');
  CHECK(bytes[4] == 1);   // version, little endian
  CHECK(bytes[8] == 2);   // rows
  CHECK(bytes[12] == 2);  // cols
  CHECK(bytes[16] == 0);  // real32

  const RealMatrix back = read_real_matrix_bin(path);
  CHECK(back.rows == 2);
  CHECK(back.cols == 2);
  CHECK(back.values == m.values);
}

TEST_CASE("complex round trip at storage precision") {
  const fs::path path = tmp_dir() / "cplx.bin";
  FrameMatrix m(3, 4);
  SplitMix64 rng(12);
  for (auto& v : m.data()) {
    // float32-representable values round-trip bit-exactly
    v = cplx{static_cast<float>(rng.uniform01()), static_cast<float>(-rng.uniform01())};
  }
  write_matrix_bin(path, m);
  const FrameMatrix back = read_frame_matrix_bin(path);
  CHECK(back.rows() == m.rows());
  CHECK(back.cols() == m.cols());
  CHECK(back.data() == m.data());

  // write -> read -> write is byte-stable
  const fs::path path2 = tmp_dir() / "cplx2.bin";
  write_matrix_bin(path2, back);
  CHECK(slurp(path) == slurp(path2));

  CHECK_THROWS_AS(read_real_matrix_bin(path), SimError);
}

TEST_CASE("csv rendering") {
  const fs::path path = tmp_dir() / "m.csv";
  RealMatrix m;
  m.rows = 2;
  m.cols = 3;
  m.values = {0.5, 1.0, -2.25, 10.0, 0.0, 1e-3};
  write_matrix_csv(path, m);
  std::ifstream is(path);
  std::string l1, l2;
  std::getline(is, l1);
  std::getline(is, l2);
  CHECK(l1 == "0.5,1,-2.25");
  CHECK(l2 == "10,0,0.001");
}

TEST_CASE("pgm export endpoints") {
  Spectrogram spec;
  spec.doppler_bins = 4;
  spec.frames = 3;
  spec.time_step = 1.0;
  spec.doppler_step = 1.0;
  spec.power.assign(12, 1e-9);
  spec.power[1 * 3 + 0] = 1.0;  // one hot cell
  const Spectrogram db = to_db(spec, -40.0);

  const fs::path path = tmp_dir() / "spec.pgm";
  write_spectrogram_pgm(path, db);
  const auto bytes = slurp(path);
  const std::string header(bytes.begin(), bytes.begin() + 9);
  CHECK(header == "P5\n3 4\n25");  // "P5\n3 4\n255\n" prefix
  REQUIRE(bytes.size() == 11 + 12);
  // all-floor cells map to 0; the hot cell maps to 255. Row 1 of the
  // spectrogram is the third image row (vertical flip).
  CHECK(bytes[11 + 2 * 3 + 0] == 255);
  CHECK(bytes[11 + 0] == 0);

  Spectrogram linear = spec;
  CHECK_THROWS_AS(write_spectrogram_pgm(tmp_dir() / "x.pgm", linear), SimError);
}

TEST_CASE("motion track round trip") {
  const fs::path path = tmp_dir() / "track.csv";
  const MotionTrack track =
      synthetic_pendulum_track({0.0, 1.0, 0.0}, 0.5, 0.3, 2.0, 120.0, 0.25);
  write_motion_track(path, track);
  const MotionTrack back = read_motion_track(path);
  CHECK(back.sample_rate == doctest::Approx(120.0).epsilon(1e-9));
  REQUIRE(back.frame_count() == track.frame_count());
  REQUIRE(back.joint_names == track.joint_names);
  for (std::size_t j = 0; j < track.joints.size(); ++j) {
    for (std::size_t k = 0; k < track.frame_count(); ++k) {
      CHECK(back.joints[j][k].x == track.joints[j][k].x);
      CHECK(back.joints[j][k].y == track.joints[j][k].y);
      CHECK(back.joints[j][k].z == track.joints[j][k].z);
    }
  }

  // write -> read -> write is byte-stable
  const fs::path path2 = tmp_dir() / "track2.csv";
  write_motion_track(path2, back);
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("track parsing rejects malformed tables") {
  const fs::path path = tmp_dir() / "bad.csv";
  {
    std::ofstream os(path);
    os << "x,y\n1,2\n";
  }
  CHECK_THROWS_AS(read_motion_track(path), SimError);
  {
    std::ofstream os(path);
    os << "frame_index,time_s,joint_name,x_m,y_m,z_m\n"
       << "0,0,a,0,0,0\n"
       << "1,0.5,a,0,0,0\n"
       << "2,0.7,a,0,0,0\n";  // non-uniform times
  }
  CHECK_THROWS_AS(read_motion_track(path), SimError);
}

TEST_CASE("skeleton round trip and the bundled bodies") {
  const fs::path dir(OMDS_PRESET_DIR);
  const auto body = read_skeleton(dir / "data" / "human_body_19.csv");
  CHECK(body.size() == kStandardBodyPrimitives);
  int spheres = 0;
  for (const Primitive& p : body) {
    CHECK(p.a > 0.0);
    CHECK(p.b > 0.0);
    CHECK(p.c > 0.0);
    if (p.kind == Primitive::Kind::Sphere) ++spheres;
  }
  CHECK(spheres == 3);  // head and both hands

  const auto pend = read_skeleton(dir / "data" / "pendulum_skeleton.csv");
  REQUIRE(pend.size() == 1);
  CHECK(pend[0].joint_a == "bob");
  CHECK(pend[0].joint_b.empty());

  const fs::path copy = tmp_dir() / "body.csv";
  write_skeleton(copy, body);
  const auto back = read_skeleton(copy);
  REQUIRE(back.size() == body.size());
  CHECK(back[0].name == body[0].name);
  CHECK(back[18].c == body[18].c);
}

TEST_CASE("fnv1a64 and manifests") {
  const std::string data = "abc";
  const std::uint64_t h =
      fnv1a64({reinterpret_cast<const unsigned char*>(data.data()), data.size()});
  // reference value for FNV-1a 64 of "abc"
  CHECK(h == 0xe71fa2190541574bull);

  const fs::path f = tmp_dir() / "abc.txt";
  {
    std::ofstream os(f);
    os << data;
  }
  CHECK(fnv1a64_file(f) == h);

  const fs::path mpath = tmp_dir() / "manifest.txt";
  write_manifest(mpath, std::vector<ManifestEntry>{{"abc.txt", 3, h}});
  std::ifstream is(mpath);
  std::string line;
  std::getline(is, line);
  CHECK(line == "abc.txt 3 fnv1a64:e71fa2190541574b");
}

TEST_CASE("format_double is locale-free shortest form") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(5.0) == "5");
  CHECK(format_double(1866.6666666666667) == "1866.6666666666667");
}
