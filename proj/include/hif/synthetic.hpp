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

#ifndef HIF_SYNTHETIC_HPP_
#define HIF_SYNTHETIC_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hif/config.hpp"
#include "hif/types.hpp"

namespace hif {

/// splitmix64: portable, seedable stream generator used for all synthetic
/// jitter so fixtures reproduce bit-exactly across platforms and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double();

  /// Standard normal via Box-Muller on two explicit uniforms.
  double next_gaussian();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Independent per-scan substream of a scene seed.
std::uint64_t scan_substream_seed(std::uint64_t seed, std::int64_t scan_index);

struct SceneAabb {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d half = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  // per scan
  bool dynamic = false;
};

struct SceneGround {
  double cx = 0.0, cy = 0.0;  // rectangle center
  double ex = 0.0, ey = 0.0;  // half extents
  double z = 0.0;
};

/// Declarative synthetic scene: ground rectangles, static boxes/walls,
/// moving boxes on linear trajectories, and a linearly moving sensor with a
/// fixed spherical sampling pattern.
struct SceneSpec {
  int scans = 0;
  std::uint64_t seed = 0;
  Eigen::Vector3d sensor_origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d sensor_velocity = Eigen::Vector3d::Zero();  // per scan
  int azimuth_steps = 360;
  int elevation_steps = 32;
  double elevation_min_deg = -30.0;
  double elevation_max_deg = 10.0;
  double max_range = 60.0;
  double jitter_sigma = 0.0;  // gaussian range jitter (m)
  std::vector<SceneGround> grounds;
  std::vector<SceneAabb> boxes;  // static and dynamic

  void validate() const;  // throws ConfigError on degenerate scenes
};

SceneSpec parse_scene(const std::string& path);

/// Deterministic ray-cast rendering of the scene: nearest hit per ray, range
/// jitter from the scan substream, occlusion by construction. Points are
/// sensor-frame, quantized to float32 so writing them in the scan format
/// round-trips exactly; labels are 40 (static) / 252 (dynamic).
std::vector<ScanFrame> gen_scene(const SceneSpec& spec, std::uint64_t seed);

/// One pillar's evidence in one scan: absent, or the local interval set.
struct PillarObservation {
  bool present = false;
  std::vector<std::pair<double, double>> intervals;
};

/// Dense 1-mm re-derivation of the per-pillar update sequence, applying
/// bayes_filter cell-by-cell with the same observation pattern, empty-space
/// prior, low-height rule, and clipping. Cells never covered stay absent.
struct GridOracleResult {
  double z_min = 0.0;
  double cell_size = 0.001;
  std::vector<double> prob;    // per cell
  std::vector<bool> known;     // false = absent
  double p_empty = 0.5;
  bool pillar_exists = false;

  std::optional<double> probability_at(double z) const;
};

GridOracleResult grid_oracle(std::span<const PillarObservation> scans,
                             const HifConfig& cfg, double z_min, double z_max);

/// Same replay, but starting from a given global pillar state instead of an
/// empty map (every observation is then a matched update, never an insert).
GridOracleResult grid_oracle_seeded(const Pillar& initial,
                                    std::span<const PillarObservation> scans,
                                    const HifConfig& cfg, double z_min,
                                    double z_max);

}  // namespace hif

#endif  // HIF_SYNTHETIC_HPP_
