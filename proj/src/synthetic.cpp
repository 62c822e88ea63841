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

#include "hif/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hif/bayes_update.hpp"
#include "hif/dataset_io.hpp"
#include "hif/pillar_index.hpp"

namespace hif {

namespace {
constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint32_t kStaticLabel = 40;   // matches a non-moving class id
constexpr std::uint32_t kDynamicLabel = 252;  // matches a moving class id
constexpr double kRayEpsilon = 1e-6;
}  // namespace

std::uint64_t SplitMix64::next_u64() {
  state_ += kGolden64;
  std::uint64_t z = state_;
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

double SplitMix64::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on explicit uniforms; u1 shifted into (0, 1] for the log.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t scan_substream_seed(std::uint64_t seed,
                                  std::int64_t scan_index) {
  return avalanche64(seed ^ avalanche64(static_cast<std::uint64_t>(scan_index)));
}

void SceneSpec::validate() const {
  if (scans < 1) throw ConfigError("scene: scans must be >= 1");
  if (grounds.empty() && boxes.empty()) {
    throw ConfigError("scene: no geometry (need ground, box, wall, or "
                      "moving_box entries)");
  }
  if (azimuth_steps < 1 || elevation_steps < 1) {
    throw ConfigError("scene: sampling steps must be >= 1");
  }
  if (!(max_range > 0.0)) throw ConfigError("scene: max_range must be > 0");
  if (elevation_min_deg > elevation_max_deg) {
    throw ConfigError("scene: elevation_min_deg > elevation_max_deg");
  }
  if (jitter_sigma < 0.0) throw ConfigError("scene: jitter_sigma must be >= 0");
}

namespace {

std::vector<double> scene_numbers(const std::string& key,
                                  const std::string& value,
                                  std::size_t min_count,
                                  std::size_t max_count) {
  std::istringstream stream(value);
  std::vector<double> numbers;
  double v;
  while (stream >> v) numbers.push_back(v);
  if (!stream.eof()) {
    throw ConfigError("scene key '" + key + "': non-numeric text in: " + value);
  }
  if (numbers.size() < min_count || numbers.size() > max_count) {
    throw ConfigError("scene key '" + key + "': expected " +
                      std::to_string(min_count) +
                      (min_count == max_count
                           ? ""
                           : ".." + std::to_string(max_count)) +
                      " numbers, got " + std::to_string(numbers.size()));
  }
  return numbers;
}

struct Hit {
  double range = std::numeric_limits<double>::infinity();
  bool dynamic = false;
};

// Slab-method ray/AABB intersection; returns entry distance or infinity.
double ray_aabb(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  double t_enter = 0.0;
  double t_exit = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(dir[a]) < 1e-15) {
      if (origin[a] < lo[a] || origin[a] > hi[a]) {
        return std::numeric_limits<double>::infinity();
      }
      continue;
    }
    double t0 = (lo[a] - origin[a]) / dir[a];
    double t1 = (hi[a] - origin[a]) / dir[a];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return std::numeric_limits<double>::infinity();
  }
  return t_enter > kRayEpsilon ? t_enter
                               : std::numeric_limits<double>::infinity();
}

}  // namespace

SceneSpec parse_scene(const std::string& path) {
  SceneSpec spec;
  for (const auto& [key, value] : parse_kv_file(path)) {
    if (key == "scans") {
      spec.scans = static_cast<int>(scene_numbers(key, value, 1, 1)[0]);
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(scene_numbers(key, value, 1, 1)[0]);
    } else if (key == "sensor_origin") {
      const auto v = scene_numbers(key, value, 3, 3);
      spec.sensor_origin = Eigen::Vector3d(v[0], v[1], v[2]);
    } else if (key == "sensor_velocity") {
      const auto v = scene_numbers(key, value, 3, 3);
      spec.sensor_velocity = Eigen::Vector3d(v[0], v[1], v[2]);
    } else if (key == "azimuth_steps") {
      spec.azimuth_steps = static_cast<int>(scene_numbers(key, value, 1, 1)[0]);
    } else if (key == "elevation_steps") {
      spec.elevation_steps =
          static_cast<int>(scene_numbers(key, value, 1, 1)[0]);
    } else if (key == "elevation_min_deg") {
      spec.elevation_min_deg = scene_numbers(key, value, 1, 1)[0];
    } else if (key == "elevation_max_deg") {
      spec.elevation_max_deg = scene_numbers(key, value, 1, 1)[0];
    } else if (key == "max_range") {
      spec.max_range = scene_numbers(key, value, 1, 1)[0];
    } else if (key == "jitter_sigma") {
      spec.jitter_sigma = scene_numbers(key, value, 1, 1)[0];
    } else if (key == "ground") {
      const auto v = scene_numbers(key, value, 4, 5);
      SceneGround g;
      g.cx = v[0];
      g.cy = v[1];
      g.ex = v[2];
      g.ey = v[3];
      g.z = v.size() == 5 ? v[4] : 0.0;
      if (!(g.ex > 0.0) || !(g.ey > 0.0)) {
        throw ConfigError("scene key 'ground': half extents must be > 0");
      }
      spec.grounds.push_back(g);
    } else if (key == "box" || key == "moving_box") {
      const bool moving = key == "moving_box";
      const auto v = scene_numbers(key, value, moving ? 9 : 6, moving ? 9 : 6);
      SceneAabb box;
      box.center = Eigen::Vector3d(v[0], v[1], v[2]);
      box.half = Eigen::Vector3d(v[3], v[4], v[5]);
      if (moving) {
        box.velocity = Eigen::Vector3d(v[6], v[7], v[8]);
        box.dynamic = true;
      }
      if (!(box.half.minCoeff() > 0.0)) {
        throw ConfigError("scene key '" + key + "': half extents must be > 0");
      }
      spec.boxes.push_back(box);
    } else if (key == "wall") {
      const auto v = scene_numbers(key, value, 5, 6);
      const double thickness = v.size() == 6 ? v[5] : 0.2;
      if (v[0] != v[2] && v[1] != v[3]) {
        throw ConfigError("scene key 'wall': must be axis-aligned");
      }
      if (!(v[4] > 0.0) || !(thickness > 0.0)) {
        throw ConfigError("scene key 'wall': height and thickness must be > 0");
      }
      SceneAabb wall;
      wall.center = Eigen::Vector3d((v[0] + v[2]) / 2.0, (v[1] + v[3]) / 2.0,
                                    v[4] / 2.0);
      wall.half = Eigen::Vector3d(
          std::max(std::abs(v[2] - v[0]) / 2.0, thickness / 2.0),
          std::max(std::abs(v[3] - v[1]) / 2.0, thickness / 2.0), v[4] / 2.0);
      spec.boxes.push_back(wall);
    } else {
      throw ConfigError("unknown scene key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

std::vector<ScanFrame> gen_scene(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  const double deg = std::numbers::pi / 180.0;
  std::vector<ScanFrame> frames;
  frames.reserve(static_cast<std::size_t>(spec.scans));

  for (int t = 0; t < spec.scans; ++t) {
    const Eigen::Vector3d sensor =
        spec.sensor_origin + static_cast<double>(t) * spec.sensor_velocity;
    SplitMix64 rng(scan_substream_seed(seed, t));

    ScanFrame frame;
    frame.index = t;
    frame.pose.rotation = Eigen::Matrix3d::Identity();
    frame.pose.translation = sensor;

    std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> box_bounds;
    box_bounds.reserve(spec.boxes.size());
    for (const SceneAabb& box : spec.boxes) {
      const Eigen::Vector3d center =
          box.center + static_cast<double>(t) * box.velocity;
      box_bounds.emplace_back(center - box.half, center + box.half);
    }

    for (int ei = 0; ei < spec.elevation_steps; ++ei) {
      const double frac =
          spec.elevation_steps == 1
              ? 0.0
              : static_cast<double>(ei) /
                    static_cast<double>(spec.elevation_steps - 1);
      const double elevation =
          (spec.elevation_min_deg +
           frac * (spec.elevation_max_deg - spec.elevation_min_deg)) *
          deg;
      const double cos_e = std::cos(elevation);
      const double sin_e = std::sin(elevation);
      for (int ai = 0; ai < spec.azimuth_steps; ++ai) {
        const double azimuth = 2.0 * std::numbers::pi *
                               static_cast<double>(ai) /
                               static_cast<double>(spec.azimuth_steps);
        const Eigen::Vector3d dir(cos_e * std::cos(azimuth),
                                  cos_e * std::sin(azimuth), sin_e);

        Hit hit;
        for (const SceneGround& g : spec.grounds) {
          if (std::abs(dir.z()) < 1e-15) continue;
          const double range = (g.z - sensor.z()) / dir.z();
          if (range <= kRayEpsilon || range >= hit.range) continue;
          const Eigen::Vector3d at = sensor + range * dir;
          if (std::abs(at.x() - g.cx) <= g.ex &&
              std::abs(at.y() - g.cy) <= g.ey) {
            hit.range = range;
            hit.dynamic = false;
          }
        }
        for (std::size_t b = 0; b < box_bounds.size(); ++b) {
          const double range =
              ray_aabb(sensor, dir, box_bounds[b].first, box_bounds[b].second);
          if (range < hit.range) {
            hit.range = range;
            hit.dynamic = spec.boxes[b].dynamic;
          }
        }
        if (hit.range > spec.max_range) continue;

        double range = hit.range;
        if (spec.jitter_sigma > 0.0) {
          range = std::max(kRayEpsilon,
                           range + spec.jitter_sigma * rng.next_gaussian());
        }
        const Eigen::Vector3d p = range * dir;
        // Quantize to float32 so the scan format round-trips losslessly.
        frame.points.push_back(
            Point3{static_cast<double>(static_cast<float>(p.x())),
                   static_cast<double>(static_cast<float>(p.y())),
                   static_cast<double>(static_cast<float>(p.z())),
                   Frame::Sensor});
        frame.labels.push_back(hit.dynamic ? kDynamicLabel : kStaticLabel);
      }
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::optional<double> GridOracleResult::probability_at(double z) const {
  if (!pillar_exists || prob.empty()) return std::nullopt;
  const auto idx =
      static_cast<std::int64_t>(std::floor((z - z_min) / cell_size));
  if (idx < 0 || idx >= static_cast<std::int64_t>(prob.size())) {
    return std::nullopt;
  }
  const auto u = static_cast<std::size_t>(idx);
  if (!known[u]) return std::nullopt;
  return prob[u];
}

namespace {

GridOracleResult oracle_replay(const Pillar* initial,
                               std::span<const PillarObservation> scans,
                               const HifConfig& cfg, double z_min,
                               double z_max) {
  GridOracleResult result;
  result.z_min = z_min;
  result.cell_size = 0.001;
  const auto cells = static_cast<std::size_t>(
      std::max(0.0, std::ceil((z_max - z_min) / result.cell_size)));
  result.prob.assign(cells, 0.0);
  result.known.assign(cells, false);

  auto cell_center = [&result](std::size_t i) {
    return result.z_min + (static_cast<double>(i) + 0.5) * result.cell_size;
  };
  auto covered = [](double z,
                    const std::vector<std::pair<double, double>>& intervals) {
    for (const auto& [b, t] : intervals) {
      if (b <= z && z <= t) return true;
    }
    return false;
  };

  if (initial != nullptr) {
    result.pillar_exists = true;
    result.p_empty = initial->p_empty;
    for (std::size_t i = 0; i < cells; ++i) {
      const double z = cell_center(i);
      for (const HeightInterval& h : initial->intervals) {
        if (h.b <= z && z <= h.t) {
          result.known[i] = true;
          result.prob[i] = h.p;
          break;
        }
      }
    }
  }

  for (const PillarObservation& obs : scans) {
    if (!obs.present) continue;

    if (!result.pillar_exists) {
      result.pillar_exists = true;
      result.p_empty = cfg.p_init;
      const double p0 = clip_probability(
          bayes_filter(cfg.p_init, cfg.alpha, cfg.beta), cfg);
      for (std::size_t i = 0; i < cells; ++i) {
        if (covered(cell_center(i), obs.intervals)) {
          result.known[i] = true;
          result.prob[i] = p0;
        }
      }
      continue;
    }

    result.p_empty = update_empty(result.p_empty, cfg);
    double b_base = std::numeric_limits<double>::infinity();
    for (const auto& [b, t] : obs.intervals) b_base = std::min(b_base, b);

    for (std::size_t i = 0; i < cells; ++i) {
      const double z = cell_center(i);
      const bool in_local = covered(z, obs.intervals);
      if (in_local && result.known[i]) {
        result.prob[i] = bayes_filter(result.prob[i], cfg.alpha, cfg.beta);
      } else if (in_local) {
        result.known[i] = true;
        result.prob[i] = bayes_filter(result.p_empty, cfg.alpha, cfg.beta);
      } else if (result.known[i]) {
        if (cfg.lhp_enabled && z <= b_base) {
          // low-height preservation: occluded unknown space keeps its value
        } else {
          result.prob[i] = bayes_filter(result.prob[i], 1.0 - cfg.alpha,
                                        1.0 - cfg.beta);
        }
      }
      if (result.known[i]) {
        result.prob[i] = clip_probability(result.prob[i], cfg);
      }
    }
  }
  return result;
}

}  // namespace

GridOracleResult grid_oracle(std::span<const PillarObservation> scans,
                             const HifConfig& cfg, double z_min,
                             double z_max) {
  return oracle_replay(nullptr, scans, cfg, z_min, z_max);
}

GridOracleResult grid_oracle_seeded(const Pillar& initial,
                                    std::span<const PillarObservation> scans,
                                    const HifConfig& cfg, double z_min,
                                    double z_max) {
  return oracle_replay(&initial, scans, cfg, z_min, z_max);
}

}  // namespace hif
