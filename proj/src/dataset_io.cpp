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

#include "hif/dataset_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

namespace hif {

namespace {

std::string read_file_bytes(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot open file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(file)),
                    std::istreambuf_iterator<char>());
  if (file.bad()) throw DataError("read failure on file: " + path);
  return bytes;
}

float le_f32_at(const std::string& bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(
             static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  }
  return std::bit_cast<float>(v);
}

std::uint32_t le_u32_at(const std::string& bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(
             static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  }
  return v;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::istringstream stream(text);
  std::vector<double> values;
  double v;
  while (stream >> v) values.push_back(v);
  return values;
}

Eigen::Matrix4d make_transform(const std::vector<double>& row_major_3x4) {
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      t(r, c) = row_major_3x4[static_cast<std::size_t>(r * 4 + c)];
    }
  }
  return t;
}

Eigen::Matrix3d reorthonormalize(const Eigen::Matrix3d& r) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  if ((u * svd.matrixV().transpose()).determinant() < 0.0) {
    u.col(2) *= -1.0;
  }
  return u * svd.matrixV().transpose();
}

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double_value(const std::string& key, const std::string& value) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &consumed);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: " + value);
  }
  if (consumed != value.size()) {
    throw ConfigError("config key '" + key + "': trailing text in: " + value);
  }
  return v;
}

std::int64_t parse_int_value(const std::string& key,
                             const std::string& value) {
  const double v = parse_double_value(key, value);
  const auto i = static_cast<std::int64_t>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError("config key '" + key + "': expected an integer, got " +
                      value);
  }
  return i;
}

bool parse_bool_value(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got " +
                    value);
}

}  // namespace

BinScan read_scan_bin(const std::string& path) {
  const std::string bytes = read_file_bytes(path);
  if (bytes.size() % 16 != 0) {
    throw DataError("scan file " + path + ": parse error at byte offset " +
                    std::to_string(bytes.size() - bytes.size() % 16) +
                    " (file length not a multiple of 16)");
  }
  BinScan scan;
  const std::size_t count = bytes.size() / 16;
  scan.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t off = i * 16;
    Point3 p{static_cast<double>(le_f32_at(bytes, off)),
             static_cast<double>(le_f32_at(bytes, off + 4)),
             static_cast<double>(le_f32_at(bytes, off + 8)), Frame::Sensor};
    // 4th float is intensity; discarded.
    if (!is_finite(p)) {
      scan.dropped_indices.push_back(i);
      continue;
    }
    scan.points.push_back(p);
  }
  return scan;
}

std::vector<RigidPose> read_poses(
    const std::string& pose_file,
    const std::optional<std::string>& calib_file) {
  Eigen::Matrix4d tr = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d tr_inv = Eigen::Matrix4d::Identity();
  if (calib_file) {
    std::ifstream calib(*calib_file);
    if (!calib) throw DataError("cannot open calib file: " + *calib_file);
    std::string line;
    bool found = false;
    while (std::getline(calib, line)) {
      const std::string trimmed = trim(line);
      if (trimmed.rfind("Tr:", 0) == 0) {
        const std::vector<double> values = parse_numbers(trimmed.substr(3));
        if (values.size() != 12) {
          throw DataError("calib file " + *calib_file +
                          ": Tr line must hold 12 numbers, got " +
                          std::to_string(values.size()));
        }
        tr = make_transform(values);
        found = true;
        break;
      }
    }
    if (!found) {
      throw DataError("calib file " + *calib_file + ": no Tr line");
    }
    tr_inv = tr.inverse();
  }

  std::ifstream file(pose_file);
  if (!file) throw DataError("cannot open pose file: " + pose_file);

  std::vector<RigidPose> poses;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::vector<double> values = parse_numbers(trimmed);
    if (values.size() != 12) {
      throw DataError("pose file " + pose_file + " line " +
                      std::to_string(line_no) + ": expected 12 numbers, got " +
                      std::to_string(values.size()));
    }
    const Eigen::Matrix4d composed = tr_inv * make_transform(values) * tr;

    RigidPose pose;
    pose.rotation = composed.block<3, 3>(0, 0);
    pose.translation = composed.block<3, 1>(0, 3);
    const double residual = pose.orthonormality_residual();
    if (residual > 1e-4) {
      throw DataError("pose file " + pose_file + " line " +
                      std::to_string(line_no) +
                      ": rotation not orthonormal (residual " +
                      std::to_string(residual) + ")");
    }
    if (residual > 1e-6) {
      pose.rotation = reorthonormalize(pose.rotation);
    }
    poses.push_back(pose);
  }
  return poses;
}

std::vector<std::uint32_t> read_labels(const std::string& path) {
  const std::string bytes = read_file_bytes(path);
  if (bytes.size() % 4 != 0) {
    throw DataError("label file " + path + ": length " +
                    std::to_string(bytes.size()) +
                    " is not a multiple of 4");
  }
  std::vector<std::uint32_t> labels;
  labels.reserve(bytes.size() / 4);
  for (std::size_t off = 0; off < bytes.size(); off += 4) {
    labels.push_back(le_u32_at(bytes, off));
  }
  return labels;
}

GroundTruth label_truth(std::uint32_t raw_label) {
  const std::uint32_t semantic = raw_label & 0xFFFFu;
  if (semantic == 0 || semantic == 1) return GroundTruth::Excluded;
  if (semantic >= 252 && semantic <= 259) return GroundTruth::Dynamic;
  return GroundTruth::Static;
}

std::vector<std::pair<std::string, std::string>> parse_kv_file(
    const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config file " + path + " line " +
                        std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config file " + path + " line " +
                        std::to_string(line_no) + ": empty key");
    }
    entries.emplace_back(key, value);
  }
  return entries;
}

RunConfig load_config(const std::string& path) {
  RunConfig config;
  SequenceSpec seq;
  SceneInput scene;
  bool any_sequence = false;
  bool any_scene = false;
  bool have_frame_start = false;
  bool have_frame_end = false;

  for (const auto& [key, value] : parse_kv_file(path)) {
    if (key == "origin_x") config.hif.origin_x = parse_double_value(key, value);
    else if (key == "origin_y") config.hif.origin_y = parse_double_value(key, value);
    else if (key == "dx") config.hif.dx = parse_double_value(key, value);
    else if (key == "dy") config.hif.dy = parse_double_value(key, value);
    else if (key == "alpha") config.hif.alpha = parse_double_value(key, value);
    else if (key == "beta") config.hif.beta = parse_double_value(key, value);
    else if (key == "gap_threshold") config.hif.gap_threshold = parse_double_value(key, value);
    else if (key == "containment_tolerance") config.hif.containment_tolerance = parse_double_value(key, value);
    else if (key == "static_threshold") config.hif.static_threshold = parse_double_value(key, value);
    else if (key == "p_init") config.hif.p_init = parse_double_value(key, value);
    else if (key == "clip_lo") config.hif.clip_lo = parse_double_value(key, value);
    else if (key == "clip_hi") config.hif.clip_hi = parse_double_value(key, value);
    else if (key == "lhp_enabled") config.hif.lhp_enabled = parse_bool_value(key, value);
    else if (key == "compaction_epsilon") config.hif.compaction_epsilon = parse_double_value(key, value);
    else if (key == "max_range") config.hif.max_range = parse_double_value(key, value);
    else if (key == "min_range") config.hif.min_range = parse_double_value(key, value);
    else if (key == "scan_dir") { seq.scan_dir = value; any_sequence = true; }
    else if (key == "pose_file") { seq.pose_file = value; any_sequence = true; }
    else if (key == "calib_file") { seq.calib_file = value; any_sequence = true; }
    else if (key == "label_dir") { seq.label_dir = value; any_sequence = true; }
    else if (key == "frame_start") { seq.frame_start = parse_int_value(key, value); have_frame_start = true; any_sequence = true; }
    else if (key == "frame_end") { seq.frame_end = parse_int_value(key, value); have_frame_end = true; any_sequence = true; }
    else if (key == "scene_file") { scene.scene_file = value; any_scene = true; }
    else if (key == "seed") { scene.seed = static_cast<std::uint64_t>(parse_int_value(key, value)); any_scene = true; }
    else throw ConfigError("unknown config key '" + key + "'");
  }

  config.hif.validate();

  if (any_sequence && any_scene) {
    throw ConfigError("config mixes dataset sequence keys with scene keys");
  }
  if (any_sequence) {
    if (seq.scan_dir.empty() || seq.pose_file.empty()) {
      throw ConfigError("sequence config requires scan_dir and pose_file");
    }
    if (!have_frame_start || !have_frame_end) {
      throw ConfigError("sequence config requires frame_start and frame_end");
    }
    if (seq.frame_start > seq.frame_end) {
      throw ConfigError("frame_start must be <= frame_end");
    }
    namespace fs = std::filesystem;
    if (!fs::is_directory(seq.scan_dir)) {
      throw ConfigError("scan_dir is not a directory: " + seq.scan_dir);
    }
    if (!fs::exists(seq.pose_file)) {
      throw ConfigError("pose_file does not exist: " + seq.pose_file);
    }
    if (seq.calib_file && !fs::exists(*seq.calib_file)) {
      throw ConfigError("calib_file does not exist: " + *seq.calib_file);
    }
    if (seq.label_dir && !fs::is_directory(*seq.label_dir)) {
      throw ConfigError("label_dir is not a directory: " + *seq.label_dir);
    }
    config.sequence = std::move(seq);
  }
  if (any_scene) {
    if (scene.scene_file.empty()) {
      throw ConfigError("scene config requires scene_file");
    }
    if (!std::filesystem::exists(scene.scene_file)) {
      throw ConfigError("scene_file does not exist: " + scene.scene_file);
    }
    config.scene = std::move(scene);
  }
  return config;
}

void write_scan_bin(const std::string& path, std::span<const Point3> points) {
  std::string out;
  out.reserve(points.size() * 16);
  auto put_f32 = [&out](float f) {
    const auto bits = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(bits >> (8 * i)));
  };
  for (const Point3& p : points) {
    put_f32(static_cast<float>(p.x));
    put_f32(static_cast<float>(p.y));
    put_f32(static_cast<float>(p.z));
    put_f32(0.0f);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot open scan file for writing: " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw DataError("failed writing scan file: " + path);
}

void write_labels(const std::string& path,
                  std::span<const std::uint32_t> labels) {
  std::string out;
  out.reserve(labels.size() * 4);
  for (const std::uint32_t v : labels) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot open label file for writing: " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw DataError("failed writing label file: " + path);
}

void write_poses(const std::string& path, std::span<const RigidPose> poses) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw DataError("cannot open pose file for writing: " + path);
  char buf[32];
  for (const RigidPose& pose : poses) {
    Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
    t.block<3, 3>(0, 0) = pose.rotation;
    t.block<3, 1>(0, 3) = pose.translation;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", t(r, c));
        file << buf;
        file << (r == 2 && c == 3 ? '\n' : ' ');
      }
    }
  }
  if (!file) throw DataError("failed writing pose file: " + path);
}

}  // namespace hif
