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

#ifndef HIF_EVALUATION_HPP_
#define HIF_EVALUATION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hif/dataset_io.hpp"
#include "hif/global_map.hpp"

namespace hif {

/// Point-level accuracies in percent. A metric is absent when its
/// denominator is zero; aa is absent whenever either side is.
struct AccuracyReport {
  std::optional<double> sa;
  std::optional<double> da;
  std::optional<double> aa;
  std::uint64_t retained_static = 0;
  std::uint64_t removed_static = 0;
  std::uint64_t removed_dynamic = 0;
  std::uint64_t retained_dynamic = 0;
  std::uint64_t excluded = 0;
};

/// sa = % of true-static points predicted Static, da = % of true-dynamic
/// points predicted Dynamic, aa = sqrt(sa * da). Excluded ground truth is
/// ignored entirely. Throws InternalError on length mismatch.
AccuracyReport score(std::span<const PointClass> predictions,
                     std::span<const GroundTruth> ground_truth);

struct RuntimeReport {
  double mean_ms = 0.0;
  double std_ms = 0.0;  // population standard deviation
  double fps = 0.0;     // 1000 / mean_ms
  std::optional<double> peak_memory_mb;
};

/// Throws InternalError on an empty list. Peak memory is sampled best-effort
/// from the process accounting interface and absent when unsupported.
RuntimeReport runtime_stats(std::span<const double> per_scan_ms);

enum class ReportFormat : std::uint8_t { Csv, Json };

/// Deterministic text report: percentages with 2 decimals, milliseconds with
/// 3. Absent metrics serialize as empty CSV fields / JSON null.
std::string emit_report(const std::optional<AccuracyReport>& acc,
                        const std::optional<RuntimeReport>& rt,
                        ReportFormat format);

}  // namespace hif

#endif  // HIF_EVALUATION_HPP_
