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

#include "hif/pillar_index.hpp"

#include <cmath>

namespace hif {

namespace {
constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;
}  // namespace

std::uint64_t avalanche64(std::uint64_t x) {
  // splitmix64 output stage; the golden-ratio offset keeps small inputs
  // (including 0) away from the finalizer's fixed point.
  x += kGolden64;
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t mix_hash(std::int64_t m, std::int64_t n) {
  const std::uint64_t hm = avalanche64(static_cast<std::uint64_t>(m));
  const std::uint64_t hn = avalanche64(static_cast<std::uint64_t>(n));
  return hm ^ (hn + kGolden64 + (hm << 6) + (hm >> 2));
}

PillarKey make_pillar_key(std::int64_t m, std::int64_t n) {
  return PillarKey{m, n, mix_hash(m, n)};
}

std::pair<std::int64_t, std::int64_t> pillar_offset(const Point3& point,
                                                    const HifConfig& cfg) {
  const auto m = static_cast<std::int64_t>(
      std::floor((point.x - cfg.origin_x) / cfg.dx));
  const auto n = static_cast<std::int64_t>(
      std::floor((point.y - cfg.origin_y) / cfg.dy));
  return {m, n};
}

bool pillar_contains(const Point3& point, std::int64_t m, std::int64_t n,
                     const HifConfig& cfg) {
  const double x0 = cfg.origin_x + static_cast<double>(m) * cfg.dx;
  const double x1 = cfg.origin_x + static_cast<double>(m + 1) * cfg.dx;
  const double y0 = cfg.origin_y + static_cast<double>(n) * cfg.dy;
  const double y1 = cfg.origin_y + static_cast<double>(n + 1) * cfg.dy;
  return x0 <= point.x && point.x < x1 && y0 <= point.y && point.y < y1;
}

PillarBuckets assign_points(const ScanFrame& scan, const HifConfig& cfg) {
  PillarBuckets buckets;
  buckets.reserve(scan.points.size() / 8 + 1);
  for (const Point3& p : scan.points) {
    const auto [m, n] = pillar_offset(p, cfg);
    buckets[make_pillar_key(m, n)].push_back(p.z);
  }
  return buckets;
}

}  // namespace hif
