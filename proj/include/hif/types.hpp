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

#ifndef HIF_TYPES_HPP_
#define HIF_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hif {

// Error categories map onto CLI exit codes: ConfigError -> 1, DataError -> 2,
// InternalError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

enum class Frame : std::uint8_t { Sensor, World };

/// One LiDAR return, meters, in the coordinate frame it is tagged with.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  Frame frame = Frame::Sensor;
};

bool is_finite(const Point3& p);

/// Rigid transform mapping sensor-frame coordinates into the world frame.
struct RigidPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  /// max(|R Rᵀ − I|) combined with |det(R) − 1|.
  double orthonormality_residual() const;
  bool is_rigid(double tol = 1e-6) const;

  Point3 apply(const Point3& p) const;
};

/// A timestamped point set plus the pose placing it in the world frame.
/// labels, when non-empty, holds one raw ground-truth class id per point.
struct ScanFrame {
  std::int64_t index = 0;
  std::vector<Point3> points;
  RigidPose pose;
  std::vector<std::uint32_t> labels;
};

/// Vertical extent [b, t] with its static-occupancy probability.
struct HeightInterval {
  double b = 0.0;
  double t = 0.0;
  double p = 0.5;
};

/// Per-pillar state: empty-space probability plus sorted, interior-disjoint
/// height intervals.
struct Pillar {
  double p_empty = 0.5;
  std::vector<HeightInterval> intervals;
};

/// Throws InternalError if the pillar violates sortedness, interior
/// disjointness, b <= t, or probability range.
void check_pillar(const Pillar& pillar, const std::string& context);

/// Pillar grid coordinates plus the precomputed mixed hash. Equality is
/// decided by (m, n) only; the hash is an index accelerator.
struct PillarKey {
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::uint64_t hash = 0;
};

inline bool operator==(const PillarKey& a, const PillarKey& b) {
  return a.m == b.m && a.n == b.n;
}

/// Counters for points rejected or events contained during ingestion.
struct IngestDiagnostics {
  std::uint64_t nonfinite_points = 0;
  std::uint64_t nonfinite_transformed = 0;
  std::uint64_t range_filtered = 0;
  std::uint64_t fuse_aborts = 0;
};

/// Maps every point through the scan pose into the world frame. Points that
/// become non-finite are dropped and counted; labels stay aligned with the
/// surviving points and order is preserved.
ScanFrame transform_to_world(const ScanFrame& scan,
                             IngestDiagnostics* diag = nullptr);

}  // namespace hif

#endif  // HIF_TYPES_HPP_
