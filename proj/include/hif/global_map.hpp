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

#ifndef HIF_GLOBAL_MAP_HPP_
#define HIF_GLOBAL_MAP_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hif/bayes_update.hpp"
#include "hif/config.hpp"
#include "hif/pillar_index.hpp"
#include "hif/types.hpp"

namespace hif {

enum class PointClass : std::uint8_t { Static, Dynamic };

struct ScanTiming {
  std::int64_t scan_index = 0;
  double millis = 0.0;
};

/// The global pillar dictionary plus scan-level orchestration. Single writer
/// for integrate_scan; classification is read-only and safe to run
/// concurrently when no integration is in flight.
class GlobalHeightMap {
 public:
  explicit GlobalHeightMap(HifConfig cfg);

  /// Builds the scan's local pillar set, fuses matched pillars, inserts
  /// unmatched ones. Accepts sensor-frame scans (transformed through the
  /// pose) or already world-frame scans. Scan indices must be strictly
  /// increasing; violations throw InternalError.
  ScanTiming integrate_scan(const ScanFrame& scan);

  /// Static iff the point's pillar exists and some interval covers z within
  /// the vertical tolerance with p >= static_threshold. Unobserved pillars
  /// classify as Dynamic.
  PointClass classify_point(const Point3& point) const;

  std::vector<PointClass> classify_cloud(std::span<const Point3> points) const;

  const Pillar* find(std::int64_t m, std::int64_t n) const;
  std::size_t pillar_count() const { return table_.size(); }
  std::int64_t last_scan_index() const { return last_scan_; }
  std::int64_t scan_count() const { return scan_count_; }
  const HifConfig& config() const { return cfg_; }
  const IngestDiagnostics& diagnostics() const { return diag_; }

  /// Keys sorted by (m, n); serialization and deterministic iteration order.
  std::vector<PillarKey> sorted_keys() const;

  /// Versioned little-endian binary round-trip.
  void save(const std::string& path) const;
  static GlobalHeightMap load(const std::string& path);

 private:
  HifConfig cfg_;
  std::unordered_map<PillarKey, Pillar, PillarKeyHash, PillarKeyEqual> table_;
  std::int64_t last_scan_ = -1;
  std::int64_t scan_count_ = 0;
  IngestDiagnostics diag_;
};

}  // namespace hif

#endif  // HIF_GLOBAL_MAP_HPP_
