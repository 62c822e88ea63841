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

#include "hif/pipeline.hpp"

#include <cstdio>
#include <filesystem>

#include "hif/synthetic.hpp"

namespace hif {

namespace {

std::string frame_file(const std::string& dir, std::int64_t index,
                       const char* extension) {
  char name[32];
  std::snprintf(name, sizeof(name), "%06lld.%s",
                static_cast<long long>(index), extension);
  return (std::filesystem::path(dir) / name).string();
}

std::vector<ScanFrame> load_sequence_frames(const SequenceSpec& seq,
                                            bool require_labels) {
  if (require_labels && !seq.label_dir) {
    throw ConfigError("labels required but label_dir is not configured");
  }
  const std::vector<RigidPose> poses =
      read_poses(seq.pose_file, seq.calib_file);
  if (seq.frame_end >= static_cast<std::int64_t>(poses.size())) {
    throw DataError("pose file " + seq.pose_file + " has " +
                    std::to_string(poses.size()) + " poses but frame_end is " +
                    std::to_string(seq.frame_end));
  }

  std::vector<ScanFrame> frames;
  frames.reserve(static_cast<std::size_t>(seq.frame_end - seq.frame_start + 1));
  for (std::int64_t idx = seq.frame_start; idx <= seq.frame_end; ++idx) {
    const std::string scan_path = frame_file(seq.scan_dir, idx, "bin");
    BinScan scan = read_scan_bin(scan_path);

    ScanFrame frame;
    frame.index = idx;
    frame.pose = poses[static_cast<std::size_t>(idx)];
    frame.points = std::move(scan.points);

    if (seq.label_dir) {
      const std::string label_path = frame_file(*seq.label_dir, idx, "label");
      std::vector<std::uint32_t> labels = read_labels(label_path);
      const std::size_t raw_count =
          frame.points.size() + scan.dropped_indices.size();
      if (labels.size() != raw_count) {
        throw DataError("frame " + std::to_string(idx) + ": " +
                        std::to_string(labels.size()) + " labels vs " +
                        std::to_string(raw_count) + " scan points");
      }
      if (scan.dropped_indices.empty()) {
        frame.labels = std::move(labels);
      } else {
        frame.labels.reserve(frame.points.size());
        std::size_t next_drop = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
          if (next_drop < scan.dropped_indices.size() &&
              scan.dropped_indices[next_drop] == i) {
            ++next_drop;
            continue;
          }
          frame.labels.push_back(labels[i]);
        }
      }
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace

std::vector<ScanFrame> load_frames(const RunConfig& config,
                                   const PipelineOverrides& overrides,
                                   bool require_labels) {
  if (config.scene) {
    const SceneSpec spec = parse_scene(config.scene->scene_file);
    std::uint64_t seed = spec.seed;
    if (config.scene->seed) seed = *config.scene->seed;
    if (overrides.seed) seed = *overrides.seed;
    return gen_scene(spec, seed);
  }
  if (config.sequence) {
    return load_sequence_frames(*config.sequence, require_labels);
  }
  throw ConfigError("config provides no input (set scan_dir/... or scene_file)");
}

PipelineResult run_pipeline(const RunConfig& config,
                            const PipelineOverrides& overrides,
                            bool require_labels) {
  HifConfig cfg = config.hif;
  if (overrides.lhp_enabled) cfg.lhp_enabled = *overrides.lhp_enabled;

  const std::vector<ScanFrame> frames =
      load_frames(config, overrides, require_labels);

  PipelineResult result;
  result.map = std::make_unique<GlobalHeightMap>(cfg);

  IngestDiagnostics cloud_diag;
  bool labelled = true;
  for (const ScanFrame& frame : frames) {
    const ScanTiming timing = result.map->integrate_scan(frame);
    result.timings.push_back(timing);
    result.per_scan_ms.push_back(timing.millis);

    const ScanFrame world = transform_to_world(frame, &cloud_diag);
    result.cloud.insert(result.cloud.end(), world.points.begin(),
                        world.points.end());
    if (world.points.empty()) continue;  // nothing to accumulate or label
    if (world.labels.empty()) {
      labelled = false;
    } else if (labelled) {
      for (const std::uint32_t raw : world.labels) {
        result.truth.push_back(label_truth(raw));
      }
    }
  }
  if (!labelled) {
    if (require_labels) {
      throw DataError("labels required but at least one frame has none");
    }
    result.truth.clear();
  }

  result.classes = result.map->classify_cloud(result.cloud);
  return result;
}

std::vector<double> run_integration_only(const HifConfig& cfg,
                                         std::span<const ScanFrame> frames) {
  GlobalHeightMap map(cfg);
  std::vector<double> per_scan_ms;
  per_scan_ms.reserve(frames.size());
  for (const ScanFrame& frame : frames) {
    per_scan_ms.push_back(map.integrate_scan(frame).millis);
  }
  return per_scan_ms;
}

}  // namespace hif
