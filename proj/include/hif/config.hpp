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

#ifndef HIF_CONFIG_HPP_
#define HIF_CONFIG_HPP_

namespace hif {

/// Tuning parameters for the whole pipeline. Defaults are usable as-is for
/// urban 64-beam data with 1 m pillars.
struct HifConfig {
  // Pillar grid: fixed global origin and footprint side lengths (m).
  double origin_x = 0.0;
  double origin_y = 0.0;
  double dx = 1.0;
  double dy = 1.0;

  // Observation model confidences; alpha > 0.5, beta < 0.5.
  double alpha = 0.7;
  double beta = 0.3;

  // 1-D clustering gap that separates height intervals (m).
  double gap_threshold = 0.5;

  // Vertical tolerance for interval containment/overlap tests (m).
  double containment_tolerance = 0.1;

  // A point is kept as static iff its interval probability >= this.
  double static_threshold = 0.5;

  // Prior for brand-new intervals and pillars.
  double p_init = 0.5;

  // Bounded-update clip range for interval probabilities.
  double clip_lo = 0.1;
  double clip_hi = 0.9;

  // Low-height preservation of occlusion-induced unknown space.
  bool lhp_enabled = true;

  // Adjacent fused intervals whose probabilities differ by at most this are
  // merged; bounds interval-count growth across scans.
  double compaction_epsilon = 0.01;

  // Optional ingest range filters (m, sensor-frame); 0 disables.
  double max_range = 0.0;
  double min_range = 0.0;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

}  // namespace hif

#endif  // HIF_CONFIG_HPP_
