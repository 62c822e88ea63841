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

#include "hif/bayes_update.hpp"

#include <algorithm>
#include <cmath>

namespace hif {

double bayes_filter(double p, double p_s, double p_d) {
  return (p_s * p) / (p_s * p + p_d * (1.0 - p));
}

double update_empty(double p_empty, const HifConfig& cfg) {
  return bayes_filter(p_empty, 1.0 - cfg.alpha, 1.0 - cfg.beta);
}

double clip_probability(double p, const HifConfig& cfg) {
  return std::max(cfg.clip_lo, std::min(cfg.clip_hi, p));
}

std::vector<double> refine_endpoints(const Pillar& local,
                                     const Pillar& global) {
  std::vector<double> endpoints;
  endpoints.reserve(2 * (local.intervals.size() + global.intervals.size()));
  for (const auto& h : local.intervals) {
    endpoints.push_back(h.b);
    endpoints.push_back(h.t);
  }
  for (const auto& h : global.intervals) {
    endpoints.push_back(h.b);
    endpoints.push_back(h.t);
  }
  std::sort(endpoints.begin(), endpoints.end());
  endpoints.erase(std::unique(endpoints.begin(), endpoints.end()),
                  endpoints.end());
  return endpoints;
}

double extract_base(const Pillar& local) {
  if (local.intervals.empty()) {
    throw InternalError("extract_base: empty pillar");
  }
  double base = local.intervals.front().b;
  for (const auto& h : local.intervals) base = std::min(base, h.b);
  return base;
}

namespace {

// Overlap of a candidate with one interval. Primary rule: the open interiors
// intersect (candidates never straddle input endpoints, so this is exactly
// containment of the candidate in the interval). Rescue rule: the candidate
// lies inside the tolerance-widened interval, which is how degenerate and
// just-touching intervals stay matchable. Returns the overlap length against
// the widened interval for tie-breaking, or a negative value if no overlap.
double overlap_length(double cb, double ct, const HeightInterval& h,
                      double tol) {
  const bool raw = std::max(cb, h.b) < std::min(ct, h.t);
  const bool rescued = cb >= h.b - tol && ct <= h.t + tol;
  if (!raw && !rescued) return -1.0;
  return std::min(ct, h.t + tol) - std::max(cb, h.b - tol);
}

int best_overlap(double cb, double ct, const std::vector<HeightInterval>& iv,
                 double tol) {
  int best = -1;
  double best_len = -1.0;
  for (std::size_t j = 0; j < iv.size(); ++j) {
    const double len = overlap_length(cb, ct, iv[j], tol);
    if (len < 0.0) continue;
    // Larger overlap wins; ties go to the lower b, i.e. the earlier entry.
    if (len > best_len) {
      best_len = len;
      best = static_cast<int>(j);
    }
  }
  return best;
}

}  // namespace

CandidateClass classify_candidate(double cb, double ct, const Pillar& local,
                                  const Pillar& global, double b_base,
                                  const HifConfig& cfg) {
  CandidateClass out;
  const double tol = cfg.containment_tolerance;
  out.local_index = best_overlap(cb, ct, local.intervals, tol);
  out.global_index = best_overlap(cb, ct, global.intervals, tol);
  const bool in_local = out.local_index >= 0;
  const bool in_global = out.global_index >= 0;

  if (!in_local && !in_global) {
    out.kind = OverlapCase::Discard;
  } else if (in_local && in_global) {
    out.kind = OverlapCase::Confirmed;
  } else if (in_local) {
    out.kind = OverlapCase::Novel;
  } else if (cfg.lhp_enabled && ct <= b_base) {
    out.kind = OverlapCase::LhpRetained;
  } else {
    out.kind = OverlapCase::Negative;
  }
  return out;
}

Pillar fuse_pillar(const Pillar& local, const Pillar& global,
                   const HifConfig& cfg) {
  check_pillar(local, "fuse_pillar: local");
  check_pillar(global, "fuse_pillar: global");
  if (local.intervals.empty()) {
    throw InternalError("fuse_pillar: local pillar has no intervals");
  }

  Pillar fused;
  fused.p_empty = update_empty(global.p_empty, cfg);

  const double b_base = extract_base(local);
  const std::vector<double> endpoints = refine_endpoints(local, global);

  for (std::size_t k = 0; k + 1 < endpoints.size(); ++k) {
    const double cb = endpoints[k];
    const double ct = endpoints[k + 1];
    const CandidateClass cls =
        classify_candidate(cb, ct, local, global, b_base, cfg);

    double p = 0.0;
    switch (cls.kind) {
      case OverlapCase::Discard:
        continue;
      case OverlapCase::Confirmed:
        p = bayes_filter(global.intervals[cls.global_index].p, cfg.alpha,
                         cfg.beta);
        break;
      case OverlapCase::Negative:
        p = bayes_filter(global.intervals[cls.global_index].p,
                         1.0 - cfg.alpha, 1.0 - cfg.beta);
        break;
      case OverlapCase::Novel:
        p = bayes_filter(fused.p_empty, cfg.alpha, cfg.beta);
        break;
      case OverlapCase::LhpRetained:
        p = global.intervals[cls.global_index].p;
        break;
    }
    p = clip_probability(p, cfg);

    // Compaction: merge into the previous interval when exactly touching and
    // the probabilities agree within epsilon. Equal probabilities keep their
    // exact common value; otherwise the merge carries the width-weighted
    // mean.
    if (!fused.intervals.empty()) {
      HeightInterval& prev = fused.intervals.back();
      if (prev.t == cb && std::abs(prev.p - p) <= cfg.compaction_epsilon) {
        if (prev.p != p) {
          const double w0 = prev.t - prev.b;
          const double w1 = ct - cb;
          prev.p = (prev.p * w0 + p * w1) / (w0 + w1);
        }
        prev.t = ct;
        continue;
      }
    }
    fused.intervals.push_back(HeightInterval{cb, ct, p});
  }

  check_pillar(fused, "fuse_pillar: output");
  return fused;
}

Pillar insert_pillar(const Pillar& local, const HifConfig& cfg) {
  check_pillar(local, "insert_pillar: local");
  Pillar inserted = local;
  for (auto& h : inserted.intervals) {
    h.p = clip_probability(bayes_filter(cfg.p_init, cfg.alpha, cfg.beta), cfg);
  }
  return inserted;
}

}  // namespace hif
