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

#include "hif/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hif {

AccuracyReport score(std::span<const PointClass> predictions,
                     std::span<const GroundTruth> ground_truth) {
  if (predictions.size() != ground_truth.size()) {
    throw InternalError("score: " + std::to_string(predictions.size()) +
                        " predictions vs " +
                        std::to_string(ground_truth.size()) +
                        " ground-truth entries");
  }
  AccuracyReport report;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    switch (ground_truth[i]) {
      case GroundTruth::Excluded:
        ++report.excluded;
        break;
      case GroundTruth::Static:
        if (predictions[i] == PointClass::Static) {
          ++report.retained_static;
        } else {
          ++report.removed_static;
        }
        break;
      case GroundTruth::Dynamic:
        if (predictions[i] == PointClass::Dynamic) {
          ++report.removed_dynamic;
        } else {
          ++report.retained_dynamic;
        }
        break;
    }
  }
  const std::uint64_t static_total =
      report.retained_static + report.removed_static;
  const std::uint64_t dynamic_total =
      report.removed_dynamic + report.retained_dynamic;
  if (static_total > 0) {
    report.sa = 100.0 * static_cast<double>(report.retained_static) /
                static_cast<double>(static_total);
  }
  if (dynamic_total > 0) {
    report.da = 100.0 * static_cast<double>(report.removed_dynamic) /
                static_cast<double>(dynamic_total);
  }
  if (report.sa && report.da) {
    report.aa = std::sqrt(*report.sa * *report.da);
  }
  return report;
}

namespace {

std::optional<double> peak_memory_mb() {
  std::ifstream status("/proc/self/status");
  if (!status) return std::nullopt;
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream stream(line.substr(6));
      double kb = 0.0;
      if (stream >> kb) return kb / 1024.0;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

}  // namespace

RuntimeReport runtime_stats(std::span<const double> per_scan_ms) {
  if (per_scan_ms.empty()) {
    throw InternalError("runtime_stats: empty timing list");
  }
  RuntimeReport report;
  double sum = 0.0;
  for (const double v : per_scan_ms) sum += v;
  report.mean_ms = sum / static_cast<double>(per_scan_ms.size());
  double sq = 0.0;
  for (const double v : per_scan_ms) {
    const double d = v - report.mean_ms;
    sq += d * d;
  }
  report.std_ms = std::sqrt(sq / static_cast<double>(per_scan_ms.size()));
  report.fps = 1000.0 / report.mean_ms;
  report.peak_memory_mb = peak_memory_mb();
  return report;
}

std::string emit_report(const std::optional<AccuracyReport>& acc,
                        const std::optional<RuntimeReport>& rt,
                        ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string header;
    std::string row;
    auto add = [&header, &row](const std::string& name,
                               const std::string& value) {
      if (!header.empty()) {
        header += ',';
        row += ',';
      }
      header += name;
      row += value;
    };
    if (acc) {
      add("sa_percent", acc->sa ? fixed(*acc->sa, 2) : "");
      add("da_percent", acc->da ? fixed(*acc->da, 2) : "");
      add("aa_percent", acc->aa ? fixed(*acc->aa, 2) : "");
      add("retained_static", std::to_string(acc->retained_static));
      add("removed_static", std::to_string(acc->removed_static));
      add("removed_dynamic", std::to_string(acc->removed_dynamic));
      add("retained_dynamic", std::to_string(acc->retained_dynamic));
      add("excluded", std::to_string(acc->excluded));
    }
    if (rt) {
      add("mean_ms", fixed(rt->mean_ms, 3));
      add("std_ms", fixed(rt->std_ms, 3));
      add("fps", fixed(rt->fps, 2));
      add("peak_memory_mb",
          rt->peak_memory_mb ? fixed(*rt->peak_memory_mb, 2) : "");
    }
    return header + "\n" + row + "\n";
  }

  nlohmann::ordered_json j;
  if (acc) {
    nlohmann::ordered_json a;
    a["sa_percent"] =
        acc->sa ? nlohmann::json(round_to(*acc->sa, 2)) : nlohmann::json();
    a["da_percent"] =
        acc->da ? nlohmann::json(round_to(*acc->da, 2)) : nlohmann::json();
    a["aa_percent"] =
        acc->aa ? nlohmann::json(round_to(*acc->aa, 2)) : nlohmann::json();
    a["retained_static"] = acc->retained_static;
    a["removed_static"] = acc->removed_static;
    a["removed_dynamic"] = acc->removed_dynamic;
    a["retained_dynamic"] = acc->retained_dynamic;
    a["excluded"] = acc->excluded;
    j["accuracy"] = a;
  }
  if (rt) {
    nlohmann::ordered_json r;
    r["mean_ms"] = round_to(rt->mean_ms, 3);
    r["std_ms"] = round_to(rt->std_ms, 3);
    r["fps"] = round_to(rt->fps, 2);
    r["peak_memory_mb"] = rt->peak_memory_mb
                              ? nlohmann::json(round_to(*rt->peak_memory_mb, 2))
                              : nlohmann::json();
    j["runtime"] = r;
  }
  return j.dump(2) + "\n";
}

}  // namespace hif
