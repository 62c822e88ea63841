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

#include "hif/interval_builder.hpp"

#include <algorithm>

namespace hif {

std::vector<std::pair<double, double>> build_intervals(
    std::vector<double> z_values, const HifConfig& cfg) {
  if (z_values.empty()) {
    throw InternalError("build_intervals: empty z list");
  }
  std::sort(z_values.begin(), z_values.end());

  std::vector<std::pair<double, double>> intervals;
  double lo = z_values.front();
  double hi = z_values.front();
  for (std::size_t i = 1; i < z_values.size(); ++i) {
    if (z_values[i] - hi > cfg.gap_threshold) {
      intervals.emplace_back(lo, hi);
      lo = z_values[i];
    }
    hi = z_values[i];
  }
  intervals.emplace_back(lo, hi);
  return intervals;
}

LocalPillarSet build_local_pillars(const ScanFrame& scan,
                                   const HifConfig& cfg) {
  LocalPillarSet local;
  PillarBuckets buckets = assign_points(scan, cfg);
  local.reserve(buckets.size());
  for (auto& [key, zs] : buckets) {
    Pillar pillar;
    pillar.p_empty = cfg.p_init;
    for (const auto& [b, t] : build_intervals(std::move(zs), cfg)) {
      pillar.intervals.push_back(HeightInterval{b, t, cfg.p_init});
    }
    local.emplace(key, std::move(pillar));
  }
  return local;
}

}  // namespace hif
