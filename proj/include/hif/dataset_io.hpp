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

#ifndef HIF_DATASET_IO_HPP_
#define HIF_DATASET_IO_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hif/config.hpp"
#include "hif/types.hpp"

namespace hif {

/// Where a KITTI-style sequence lives and which inclusive frame range to use.
struct SequenceSpec {
  std::string scan_dir;
  std::string pose_file;
  std::optional<std::string> calib_file;
  std::optional<std::string> label_dir;
  std::int64_t frame_start = 0;
  std::int64_t frame_end = 0;
};

/// A synthetic scene as run input.
struct SceneInput {
  std::string scene_file;
  std::optional<std::uint64_t> seed;  // overrides the scene file's seed
};

struct RunConfig {
  HifConfig hif;
  std::optional<SequenceSpec> sequence;
  std::optional<SceneInput> scene;
};

struct BinScan {
  std::vector<Point3> points;  // sensor frame, intensity discarded
  // Indices (into the raw record stream) of non-finite points dropped;
  // needed to keep per-point label files aligned.
  std::vector<std::size_t> dropped_indices;
};

/// Parses little-endian float32 (x, y, z, intensity) records.
BinScan read_scan_bin(const std::string& path);

/// Reads one pose per line (row-major 3x4). With a calib file, each pose P is
/// conjugated into the sensor frame: Tr^-1 * P * Tr.
std::vector<RigidPose> read_poses(
    const std::string& pose_file,
    const std::optional<std::string>& calib_file);

/// Little-endian uint32 per point.
std::vector<std::uint32_t> read_labels(const std::string& path);

enum class GroundTruth : std::uint8_t { Static, Dynamic, Excluded };

/// Semantic class is the low 16 bits; moving classes 252-259 are dynamic,
/// classes 0 and 1 are excluded from scoring.
GroundTruth label_truth(std::uint32_t raw_label);

/// Flat key = value configuration file; '#' starts a comment. Unknown keys
/// are rejected; omitted keys take documented defaults.
RunConfig load_config(const std::string& path);

/// Low-level key/value lines shared by run configs and scene files.
std::vector<std::pair<std::string, std::string>> parse_kv_file(
    const std::string& path);

void write_scan_bin(const std::string& path, std::span<const Point3> points);
void write_labels(const std::string& path,
                  std::span<const std::uint32_t> labels);
void write_poses(const std::string& path, std::span<const RigidPose> poses);

}  // namespace hif

#endif  // HIF_DATASET_IO_HPP_
