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

#include "hif/types.hpp"

#include <cmath>

#include <Eigen/LU>

#include "hif/config.hpp"

namespace hif {

bool is_finite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

double RigidPose::orthonormality_residual() const {
  const Eigen::Matrix3d gram = rotation * rotation.transpose();
  const double off = (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det = std::abs(rotation.determinant() - 1.0);
  return std::max(off, det);
}

bool RigidPose::is_rigid(double tol) const {
  return orthonormality_residual() <= tol;
}

Point3 RigidPose::apply(const Point3& p) const {
  const Eigen::Vector3d v =
      rotation * Eigen::Vector3d(p.x, p.y, p.z) + translation;
  return Point3{v.x(), v.y(), v.z(), Frame::World};
}

ScanFrame transform_to_world(const ScanFrame& scan, IngestDiagnostics* diag) {
  ScanFrame out;
  out.index = scan.index;
  out.pose = scan.pose;
  out.points.reserve(scan.points.size());
  const bool has_labels = !scan.labels.empty();
  if (has_labels && scan.labels.size() != scan.points.size()) {
    throw InternalError("transform_to_world: label count " +
                        std::to_string(scan.labels.size()) +
                        " does not match point count " +
                        std::to_string(scan.points.size()));
  }
  if (has_labels) out.labels.reserve(scan.labels.size());
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    Point3 w = scan.pose.apply(scan.points[i]);
    if (!is_finite(w)) {
      if (diag != nullptr) ++diag->nonfinite_transformed;
      continue;
    }
    out.points.push_back(w);
    if (has_labels) out.labels.push_back(scan.labels[i]);
  }
  return out;
}

void check_pillar(const Pillar& pillar, const std::string& context) {
  if (pillar.p_empty < 0.0 || pillar.p_empty > 1.0 ||
      !std::isfinite(pillar.p_empty)) {
    throw InternalError(context + ": p_empty out of [0,1]");
  }
  const auto& iv = pillar.intervals;
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (!(iv[i].b <= iv[i].t)) {
      throw InternalError(context + ": interval with b > t");
    }
    if (iv[i].p < 0.0 || iv[i].p > 1.0 || !std::isfinite(iv[i].p)) {
      throw InternalError(context + ": interval probability out of [0,1]");
    }
    if (i + 1 < iv.size() && !(iv[i].t <= iv[i + 1].b)) {
      throw InternalError(context + ": intervals unsorted or overlapping");
    }
  }
}

void HifConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError("config key '" + key + "' " + why);
  };
  if (!(dx > 0.0)) fail("dx", "must be > 0");
  if (!(dy > 0.0)) fail("dy", "must be > 0");
  if (!(alpha > 0.5) || !(alpha < 1.0)) fail("alpha", "must be in (0.5, 1)");
  if (!(beta < 0.5) || !(beta > 0.0)) fail("beta", "must be in (0, 0.5)");
  if (!(gap_threshold > 0.0)) fail("gap_threshold", "must be > 0");
  if (containment_tolerance < 0.0)
    fail("containment_tolerance", "must be >= 0");
  if (!(static_threshold > 0.0) || !(static_threshold < 1.0))
    fail("static_threshold", "must be in (0, 1)");
  if (p_init < 0.0 || p_init > 1.0) fail("p_init", "must be in [0, 1]");
  if (!(clip_lo > 0.0) || !(clip_lo < clip_hi) || !(clip_hi < 1.0))
    fail("clip_lo/clip_hi", "must satisfy 0 < clip_lo < clip_hi < 1");
  if (compaction_epsilon < 0.0) fail("compaction_epsilon", "must be >= 0");
  if (max_range < 0.0) fail("max_range", "must be >= 0");
  if (min_range < 0.0) fail("min_range", "must be >= 0");
}

}  // namespace hif
