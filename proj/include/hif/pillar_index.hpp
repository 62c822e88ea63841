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

#ifndef HIF_PILLAR_INDEX_HPP_
#define HIF_PILLAR_INDEX_HPP_

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hif/config.hpp"
#include "hif/types.hpp"

namespace hif {

/// 64-bit avalanche hash (splitmix64 finalizer over the golden-ratio-offset
/// input). Frozen: golden regression values depend on it.
std::uint64_t avalanche64(std::uint64_t x);

/// Combines the per-axis hashes into one pillar index:
/// h(m) ^ (h(n) + C + (h(m) << 6) + (h(m) >> 2)) with the 64-bit golden-ratio
/// constant C, all in wrapping unsigned arithmetic.
std::uint64_t mix_hash(std::int64_t m, std::int64_t n);

PillarKey make_pillar_key(std::int64_t m, std::int64_t n);

/// Grid offset of a world-frame point: mathematical floor of the
/// origin-relative coordinates over the pillar side lengths.
std::pair<std::int64_t, std::int64_t> pillar_offset(const Point3& point,
                                                    const HifConfig& cfg);

/// Left-closed/right-open membership predicate of pillar (m, n), evaluated
/// directly on the boundary expressions (independent of pillar_offset).
bool pillar_contains(const Point3& point, std::int64_t m, std::int64_t n,
                     const HifConfig& cfg);

struct PillarKeyHash {
  std::size_t operator()(const PillarKey& k) const noexcept {
    return static_cast<std::size_t>(k.hash);
  }
};

struct PillarKeyEqual {
  bool operator()(const PillarKey& a, const PillarKey& b) const noexcept {
    return a.m == b.m && a.n == b.n;
  }
};

using PillarBuckets =
    std::unordered_map<PillarKey, std::vector<double>, PillarKeyHash,
                       PillarKeyEqual>;

/// Buckets every point of a world-frame scan by pillar key; payload is the
/// multiset of z coordinates.
PillarBuckets assign_points(const ScanFrame& scan, const HifConfig& cfg);

}  // namespace hif

#endif  // HIF_PILLAR_INDEX_HPP_
