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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "hif/interval_builder.hpp"
#include "hif/synthetic.hpp"

namespace {

// Independent single-linkage oracle: union-find over all pairs within the
// gap threshold, clusters reported as [min, max].
std::vector<std::pair<double, double>> linkage_oracle(
    const std::vector<double>& zs, double gap) {
  const std::size_t n = zs.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find =
      [&](std::size_t i) -> std::size_t {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(zs[i] - zs[j]) <= gap) parent[find(i)] = find(j);
    }
  }
  std::vector<std::pair<double, double>> clusters;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(i) != i) continue;
    double lo = zs[i], hi = zs[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (find(j) == find(i)) {
        lo = std::min(lo, zs[j]);
        hi = std::max(hi, zs[j]);
      }
    }
    clusters.emplace_back(lo, hi);
  }
  std::sort(clusters.begin(), clusters.end());
  return clusters;
}

hif::HifConfig gap_config(double gap) {
  hif::HifConfig cfg;
  cfg.gap_threshold = gap;
  return cfg;
}

}  // namespace

TEST_CASE("close values form a single cluster") {
  const auto iv = hif::build_intervals({0.0, 0.1, 0.2}, gap_config(0.5));
  REQUIRE(iv.size() == 1);
  CHECK(iv[0] == std::pair<double, double>{0.0, 0.2});
}

TEST_CASE("a gap beyond the threshold splits clusters") {
  const auto iv = hif::build_intervals({0.0, 0.1, 1.5, 1.6}, gap_config(0.5));
  REQUIRE(iv.size() == 2);
  CHECK(iv[0] == std::pair<double, double>{0.0, 0.1});
  CHECK(iv[1] == std::pair<double, double>{1.5, 1.6});
  CHECK(iv == linkage_oracle({0.0, 0.1, 1.5, 1.6}, 0.5));
}

TEST_CASE("a singleton yields a degenerate interval") {
  const auto iv = hif::build_intervals({2.0}, gap_config(0.5));
  REQUIRE(iv.size() == 1);
  CHECK(iv[0].first == 2.0);
  CHECK(iv[0].second == 2.0);
}

TEST_CASE("a gap exactly at the threshold stays merged") {
  const auto iv = hif::build_intervals({0.0, 0.5}, gap_config(0.5));
  REQUIRE(iv.size() == 1);
  CHECK(iv[0] == std::pair<double, double>{0.0, 0.5});
}

TEST_CASE("empty input is caller misuse") {
  CHECK_THROWS_AS(hif::build_intervals({}, gap_config(0.5)),
                  hif::InternalError);
}

TEST_CASE("clustering is permutation invariant and matches the oracle") {
  hif::SplitMix64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> zs;
    const int n = 1 + static_cast<int>(rng.next_u64() % 40);
    for (int i = 0; i < n; ++i) zs.push_back(rng.next_double() * 8.0 - 2.0);
    const double gap = 0.1 + rng.next_double() * 0.8;

    const auto sorted_result = hif::build_intervals(zs, gap_config(gap));
    CHECK(sorted_result == linkage_oracle(zs, gap));

    std::vector<double> shuffled = zs;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[rng.next_u64() % i]);
    }
    CHECK(hif::build_intervals(shuffled, gap_config(gap)) == sorted_result);

    // Inter-cluster gaps strictly exceed the threshold; every input value is
    // covered by exactly one interval.
    for (std::size_t i = 0; i + 1 < sorted_result.size(); ++i) {
      CHECK(sorted_result[i + 1].first - sorted_result[i].second > gap);
    }
    for (const double z : zs) {
      int covering = 0;
      for (const auto& [b, t] : sorted_result) {
        if (b <= z && z <= t) ++covering;
      }
      CHECK(covering == 1);
    }
  }
}

TEST_CASE("re-clustering interval midpoints nests within the originals") {
  hif::SplitMix64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> zs;
    const int n = 2 + static_cast<int>(rng.next_u64() % 30);
    for (int i = 0; i < n; ++i) zs.push_back(rng.next_double() * 10.0);
    const double gap = 0.2 + rng.next_double() * 0.6;
    const auto original = hif::build_intervals(zs, gap_config(gap));

    std::vector<double> midpoints;
    for (const auto& [b, t] : original) midpoints.push_back((b + t) / 2.0);
    const auto rebuilt = hif::build_intervals(midpoints, gap_config(gap));
    for (const auto& [b, t] : rebuilt) {
      const bool nested = std::any_of(
          original.begin(), original.end(), [&](const auto& o) {
            return o.first <= b && t <= o.second;
          });
      CHECK(nested);
    }
  }
}

TEST_CASE("build_local_pillars composes bucketing and clustering") {
  hif::HifConfig cfg;

  hif::ScanFrame empty;
  CHECK(hif::build_local_pillars(empty, cfg).empty());

  hif::ScanFrame one;
  one.points = {hif::Point3{0.5, 0.5, 1.0, hif::Frame::World}};
  const hif::LocalPillarSet single = hif::build_local_pillars(one, cfg);
  REQUIRE(single.size() == 1);
  const hif::Pillar& pillar = single.at(hif::make_pillar_key(0, 0));
  CHECK(pillar.p_empty == cfg.p_init);
  REQUIRE(pillar.intervals.size() == 1);
  CHECK(pillar.intervals[0].b == 1.0);
  CHECK(pillar.intervals[0].t == 1.0);
  CHECK(pillar.intervals[0].p == cfg.p_init);
}

TEST_CASE("two separated layers become two intervals per pillar") {
  hif::HifConfig cfg;
  hif::SplitMix64 rng(23);
  hif::ScanFrame scan;
  std::vector<double> zs;
  for (int i = 0; i < 30; ++i) {
    const double ground = rng.next_double() * 0.2;          // near z = 0
    const double canopy = 3.0 + rng.next_double() * 0.2;    // near z = 3
    scan.points.push_back(hif::Point3{0.3, 0.3, ground, hif::Frame::World});
    scan.points.push_back(hif::Point3{0.6, 0.6, canopy, hif::Frame::World});
    zs.push_back(ground);
    zs.push_back(canopy);
  }
  const hif::LocalPillarSet local = hif::build_local_pillars(scan, cfg);
  REQUIRE(local.size() == 1);
  const hif::Pillar& pillar = local.at(hif::make_pillar_key(0, 0));
  REQUIRE(pillar.intervals.size() == 2);
  CHECK(pillar.intervals[0].t < 0.5);
  CHECK(pillar.intervals[1].b > 2.5);

  // Cross-check against the brute-force oracle.
  const auto oracle = linkage_oracle(zs, cfg.gap_threshold);
  REQUIRE(oracle.size() == 2);
  CHECK(pillar.intervals[0].b == oracle[0].first);
  CHECK(pillar.intervals[0].t == oracle[0].second);
  CHECK(pillar.intervals[1].b == oracle[1].first);
  CHECK(pillar.intervals[1].t == oracle[1].second);
}
