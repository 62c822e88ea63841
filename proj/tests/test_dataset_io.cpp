/*
 * Copyright 2026 The HIF Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include <Eigen/Geometry>

#include "hif/dataset_io.hpp"
#include "hif/synthetic.hpp"

namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    dir_ = fs::temp_directory_path() /
           ("hif_io_test_" + std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

 private:
  static inline int counter_ = 0;
  fs::path dir_;
};

void write_raw(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string f32_record(float x, float y, float z, float intensity) {
  std::string out;
  for (const float v : {x, y, z, intensity}) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(bits >> (8 * i)));
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  f << text;
}

}  // namespace

TEST_CASE("scan parsing: single record, empty file, framing violation") {
  TempDir dir;
  const std::string one = dir.path("one.bin");
  write_raw(one, f32_record(1.0f, 2.0f, 3.0f, 0.5f));
  const hif::BinScan scan = hif::read_scan_bin(one);
  REQUIRE(scan.points.size() == 1);
  CHECK(scan.points[0].x == 1.0);
  CHECK(scan.points[0].y == 2.0);
  CHECK(scan.points[0].z == 3.0);
  CHECK(scan.points[0].frame == hif::Frame::Sensor);

  const std::string empty = dir.path("empty.bin");
  write_raw(empty, "");
  CHECK(hif::read_scan_bin(empty).points.empty());

  const std::string bad = dir.path("bad.bin");
  write_raw(bad, f32_record(1, 2, 3, 4) + "x");
  CHECK_THROWS_WITH_AS(hif::read_scan_bin(bad), doctest::Contains("16"),
                       hif::DataError);
}

TEST_CASE("scan parsing drops non-finite points with their indices") {
  TempDir dir;
  const std::string path = dir.path("nan.bin");
  write_raw(path, f32_record(1, 1, 1, 0) +
                      f32_record(std::numeric_limits<float>::quiet_NaN(), 0,
                                 0, 0) +
                      f32_record(2, 2, 2, 0));
  const hif::BinScan scan = hif::read_scan_bin(path);
  REQUIRE(scan.points.size() == 2);
  REQUIRE(scan.dropped_indices.size() == 1);
  CHECK(scan.dropped_indices[0] == 1);
}

TEST_CASE("pose parsing: identity, translation, calib conjugation") {
  TempDir dir;
  const std::string poses = dir.path("poses.txt");
  write_text_file(poses,
                  "1 0 0 0 0 1 0 0 0 0 1 0\n"
                  "1 0 0 5 0 1 0 0 0 0 1 0\n");
  const auto parsed = hif::read_poses(poses, std::nullopt);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].rotation.isApprox(Eigen::Matrix3d::Identity(), 1e-12));
  CHECK(parsed[0].translation.norm() == doctest::Approx(0.0));
  CHECK(parsed[1].translation.x() == doctest::Approx(5.0));

  // Conjugating the identity by any rigid calib leaves it the identity.
  const std::string calib = dir.path("calib.txt");
  write_text_file(calib, "P0: 1 0 0 0 0 1 0 0 0 0 1 0\nTr: 1 0 0 0 0 1 0 0 0 0 1 1\n");
  const auto with_calib = hif::read_poses(poses, calib);
  REQUIRE(with_calib.size() == 2);
  CHECK(with_calib[0].rotation.isApprox(Eigen::Matrix3d::Identity(), 1e-9));
  CHECK(with_calib[0].translation.norm() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("pose parsing rejects malformed and non-rigid input") {
  TempDir dir;
  const std::string short_line = dir.path("short.txt");
  write_text_file(short_line, "1 0 0 0 0 1 0 0 0 0 1\n");
  CHECK_THROWS_WITH_AS(hif::read_poses(short_line, std::nullopt),
                       doctest::Contains("line 1"), hif::DataError);

  const std::string scaled = dir.path("scaled.txt");
  write_text_file(scaled, "2 0 0 0 0 2 0 0 0 0 2 0\n");
  CHECK_THROWS_AS(hif::read_poses(scaled, std::nullopt), hif::DataError);
}

TEST_CASE("label parsing and the ground-truth class map") {
  TempDir dir;
  const std::string path = dir.path("labels.label");
  std::string bytes;
  for (const std::uint32_t v : {252u, 0u, 40u, 0x00010028u, 259u, 260u}) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>(v >> (8 * i)));
  }
  write_raw(path, bytes);
  const auto labels = hif::read_labels(path);
  REQUIRE(labels.size() == 6);
  CHECK(hif::label_truth(labels[0]) == hif::GroundTruth::Dynamic);
  CHECK(hif::label_truth(labels[1]) == hif::GroundTruth::Excluded);
  CHECK(hif::label_truth(labels[2]) == hif::GroundTruth::Static);
  // Instance bits in the high half do not change the semantic class.
  CHECK(hif::label_truth(labels[3]) == hif::GroundTruth::Static);
  CHECK(hif::label_truth(labels[4]) == hif::GroundTruth::Dynamic);
  CHECK(hif::label_truth(labels[5]) == hif::GroundTruth::Static);
  CHECK(hif::label_truth(1u) == hif::GroundTruth::Excluded);

  const std::string bad = dir.path("bad.label");
  write_raw(bad, "abc");
  CHECK_THROWS_AS(hif::read_labels(bad), hif::DataError);
}

TEST_CASE("config loading: defaults, overrides, rejections") {
  TempDir dir;
  const std::string empty = dir.path("empty.cfg");
  write_text_file(empty, "# nothing but a comment\n");
  const hif::RunConfig defaults = hif::load_config(empty);
  CHECK(defaults.hif.dx == 1.0);
  CHECK(defaults.hif.dy == 1.0);
  CHECK(defaults.hif.alpha == 0.7);
  CHECK(defaults.hif.beta == 0.3);
  CHECK(defaults.hif.gap_threshold == 0.5);
  CHECK(defaults.hif.containment_tolerance == 0.1);
  CHECK(defaults.hif.static_threshold == 0.5);
  CHECK(defaults.hif.clip_lo == 0.1);
  CHECK(defaults.hif.clip_hi == 0.9);
  CHECK(defaults.hif.lhp_enabled);
  CHECK_FALSE(defaults.sequence.has_value());
  CHECK_FALSE(defaults.scene.has_value());

  const std::string custom = dir.path("custom.cfg");
  write_text_file(custom, "dx = 1.5\nlhp_enabled = false\n");
  const hif::RunConfig overridden = hif::load_config(custom);
  CHECK(overridden.hif.dx == 1.5);
  CHECK(overridden.hif.dy == 1.0);
  CHECK_FALSE(overridden.hif.lhp_enabled);

  const std::string invalid = dir.path("invalid.cfg");
  write_text_file(invalid, "alpha = 0.4\n");
  CHECK_THROWS_WITH_AS(hif::load_config(invalid), doctest::Contains("alpha"),
                       hif::ConfigError);

  const std::string unknown = dir.path("unknown.cfg");
  write_text_file(unknown, "voxel_size = 0.1\n");
  CHECK_THROWS_WITH_AS(hif::load_config(unknown),
                       doctest::Contains("voxel_size"), hif::ConfigError);

  const std::string missing_files = dir.path("missing.cfg");
  write_text_file(missing_files,
                  "scan_dir = /nonexistent/scans\npose_file = "
                  "/nonexistent/poses.txt\nframe_start = 0\nframe_end = 1\n");
  CHECK_THROWS_AS(hif::load_config(missing_files), hif::ConfigError);
}

TEST_CASE("writers round-trip scans, labels, and poses") {
  TempDir dir;

  // Points quantized to float32 re-read bit-identically.
  std::vector<hif::Point3> points;
  hif::SplitMix64 rng(51);
  for (int i = 0; i < 100; ++i) {
    points.push_back(hif::Point3{
        static_cast<double>(static_cast<float>(rng.next_double() * 100.0)),
        static_cast<double>(static_cast<float>(rng.next_double() * 100.0)),
        static_cast<double>(static_cast<float>(rng.next_double() * 10.0)),
        hif::Frame::Sensor});
  }
  const std::string scan_path = dir.path("scan.bin");
  hif::write_scan_bin(scan_path, points);
  const hif::BinScan reread = hif::read_scan_bin(scan_path);
  REQUIRE(reread.points.size() == points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(reread.points[i].x == points[i].x);
    CHECK(reread.points[i].y == points[i].y);
    CHECK(reread.points[i].z == points[i].z);
  }

  std::vector<std::uint32_t> labels = {40, 252, 0, 1, 259};
  const std::string label_path = dir.path("labels.label");
  hif::write_labels(label_path, labels);
  CHECK(hif::read_labels(label_path) == labels);

  std::vector<hif::RigidPose> poses;
  for (int i = 0; i < 5; ++i) {
    hif::RigidPose pose;
    pose.rotation = Eigen::AngleAxisd(0.3 * i, Eigen::Vector3d::UnitZ())
                        .toRotationMatrix();
    pose.translation = Eigen::Vector3d(1.7 * i, -0.3 * i, 0.1);
    poses.push_back(pose);
  }
  const std::string pose_path = dir.path("poses.txt");
  hif::write_poses(pose_path, poses);
  const auto reread_poses = hif::read_poses(pose_path, std::nullopt);
  REQUIRE(reread_poses.size() == poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    CHECK(reread_poses[i].rotation.isApprox(poses[i].rotation, 1e-15));
    CHECK(reread_poses[i].translation.isApprox(poses[i].translation, 1e-15));
  }
}
