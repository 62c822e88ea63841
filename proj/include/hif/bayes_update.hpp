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

#ifndef HIF_BAYES_UPDATE_HPP_
#define HIF_BAYES_UPDATE_HPP_

#include <vector>

#include "hif/config.hpp"
#include "hif/types.hpp"

namespace hif {

/// How a refined candidate interval relates to the current scan (local) and
/// the global map, decided by the emptiness pattern of its overlap sets plus
/// the low-height predicate.
enum class OverlapCase : std::uint8_t {
  Discard,      // covered by neither local nor global
  Confirmed,    // covered by both: positive evidence
  Negative,     // global only: unobserved this scan
  Novel,        // local only: seeded from the pillar's empty-space prior
  LhpRetained,  // global only, entirely below the scan's base height
};

/// Binary Bayes update: P_S*p / (P_S*p + P_D*(1-p)). Monotone increasing in
/// p; inverse of itself under swapped evidence (P_S <-> P_D).
double bayes_filter(double p, double p_s, double p_d);

/// Empty-space update applied when a global pillar is matched by the scan:
/// bayes_filter(p_empty, 1-alpha, 1-beta).
double update_empty(double p_empty, const HifConfig& cfg);

double clip_probability(double p, const HifConfig& cfg);

/// Sorted, deduplicated union of all interval endpoints of both pillars.
/// Consecutive pairs define the refined candidate intervals.
std::vector<double> refine_endpoints(const Pillar& local,
                                     const Pillar& global);

/// Minimum lower bound among the local pillar's intervals; the boundary of
/// observable space this scan. Throws InternalError on an empty pillar.
double extract_base(const Pillar& local);

struct CandidateClass {
  OverlapCase kind = OverlapCase::Discard;
  int local_index = -1;   // overlapping local interval, -1 if none
  int global_index = -1;  // overlapping global interval, -1 if none
};

/// Classifies one candidate [cb, ct]. Overlap against an interval holds when
/// the open interiors intersect, or when the candidate lies entirely inside
/// the interval widened by cfg.containment_tolerance (this is what lets
/// degenerate b == t intervals match their neighbourhood). Ties under
/// tolerance go to the larger overlap, then the lower b.
CandidateClass classify_candidate(double cb, double ct, const Pillar& local,
                                  const Pillar& global, double b_base,
                                  const HifConfig& cfg);

/// Full per-pillar fusion of one scan's local pillar into its matched global
/// pillar: empty-space update, endpoint refinement, per-candidate Bayes
/// updates (with low-height preservation when enabled), probability
/// clipping, and compaction of equal-probability neighbours. The result
/// replaces the global pillar. Throws InternalError if either input violates
/// pillar invariants.
Pillar fuse_pillar(const Pillar& local, const Pillar& global,
                   const HifConfig& cfg);

/// First-observation path for a pillar with no global match: every local
/// interval receives one positive update from the uninformed prior.
Pillar insert_pillar(const Pillar& local, const HifConfig& cfg);

}  // namespace hif

#endif  // HIF_BAYES_UPDATE_HPP_
