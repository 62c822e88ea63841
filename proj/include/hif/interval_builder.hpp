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

#ifndef HIF_INTERVAL_BUILDER_HPP_
#define HIF_INTERVAL_BUILDER_HPP_

#include <unordered_map>
#include <utility>
#include <vector>

#include "hif/config.hpp"
#include "hif/pillar_index.hpp"
#include "hif/types.hpp"

namespace hif {

/// Single-linkage 1-D clustering of a pillar's z values: sorts ascending and
/// starts a new cluster whenever the gap between consecutive values exceeds
/// cfg.gap_threshold. Each cluster becomes the interval [min z, max z]; a
/// lone value yields a degenerate interval b == t.
/// Throws InternalError on empty input (empty pillars are never created).
std::vector<std::pair<double, double>> build_intervals(
    std::vector<double> z_values, const HifConfig& cfg);

using LocalPillarSet =
    std::unordered_map<PillarKey, Pillar, PillarKeyHash, PillarKeyEqual>;

/// assign_points composed with build_intervals per pillar. Local pillars
/// carry placeholder probabilities (p_init); evidence is applied once, at the
/// global update.
LocalPillarSet build_local_pillars(const ScanFrame& scan,
                                   const HifConfig& cfg);

}  // namespace hif

#endif  // HIF_INTERVAL_BUILDER_HPP_
