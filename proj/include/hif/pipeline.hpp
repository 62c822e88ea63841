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

#ifndef HIF_PIPELINE_HPP_
#define HIF_PIPELINE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hif/dataset_io.hpp"
#include "hif/evaluation.hpp"
#include "hif/global_map.hpp"

namespace hif {

struct PipelineOverrides {
  std::optional<bool> lhp_enabled;
  std::optional<std::uint64_t> seed;
};

/// Full ingestion -> integration -> classification pass over the configured
/// input. The accumulated cloud holds every integrated world-frame point in
/// scan order; truth is empty when no labels were configured.
struct PipelineResult {
  std::unique_ptr<GlobalHeightMap> map;
  std::vector<double> per_scan_ms;
  std::vector<ScanTiming> timings;
  std::vector<Point3> cloud;
  std::vector<GroundTruth> truth;
  std::vector<PointClass> classes;
};

/// Loads frames (dataset sequence or synthetic scene), integrates them in
/// index order, then classifies the accumulated cloud against the final map.
/// require_labels makes missing labels an error instead of an empty truth.
PipelineResult run_pipeline(const RunConfig& config,
                            const PipelineOverrides& overrides,
                            bool require_labels);

/// Integration-only pass over pre-loaded frames (no accumulation, no
/// classification); used for benchmarking repetitions.
std::vector<double> run_integration_only(const HifConfig& cfg,
                                         std::span<const ScanFrame> frames);

/// Materializes the frames the pipeline would consume (points stay
/// sensor-frame; the map applies poses during integration).
std::vector<ScanFrame> load_frames(const RunConfig& config,
                                   const PipelineOverrides& overrides,
                                   bool require_labels);

}  // namespace hif

#endif  // HIF_PIPELINE_HPP_
