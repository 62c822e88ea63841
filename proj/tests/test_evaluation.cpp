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

#include <cmath>
#include <vector>

#include <json.hpp>

#include "hif/evaluation.hpp"
#include "hif/synthetic.hpp"

namespace {

// Builds aligned prediction/truth vectors realizing the given counts.
struct Scenario {
  std::vector<hif::PointClass> pred;
  std::vector<hif::GroundTruth> truth;
  void add(hif::GroundTruth t, hif::PointClass p, std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i) {
      pred.push_back(p);
      truth.push_back(t);
    }
  }
};

}  // namespace

TEST_CASE("score reproduces the benchmark-style percentages") {
  // 2460/2500 static kept -> SA 98.40; 4773/5000 dynamic removed -> DA 95.46.
  Scenario s;
  s.add(hif::GroundTruth::Static, hif::PointClass::Static, 2460);
  s.add(hif::GroundTruth::Static, hif::PointClass::Dynamic, 40);
  s.add(hif::GroundTruth::Dynamic, hif::PointClass::Dynamic, 4773);
  s.add(hif::GroundTruth::Dynamic, hif::PointClass::Static, 227);
  s.add(hif::GroundTruth::Excluded, hif::PointClass::Static, 3);

  const hif::AccuracyReport r = hif::score(s.pred, s.truth);
  REQUIRE(r.sa.has_value());
  REQUIRE(r.da.has_value());
  REQUIRE(r.aa.has_value());
  CHECK(*r.sa == doctest::Approx(98.40));
  CHECK(*r.da == doctest::Approx(95.46));
  CHECK(*r.aa == doctest::Approx(96.92).epsilon(0.0001));
  CHECK(r.excluded == 3);
}

TEST_CASE("all-correct predictions score 100 everywhere") {
  Scenario s;
  s.add(hif::GroundTruth::Static, hif::PointClass::Static, 10);
  s.add(hif::GroundTruth::Dynamic, hif::PointClass::Dynamic, 10);
  const hif::AccuracyReport r = hif::score(s.pred, s.truth);
  CHECK(*r.sa == 100.0);
  CHECK(*r.da == 100.0);
  CHECK(*r.aa == 100.0);
}

TEST_CASE("the geometric mean annihilates on zero accuracy") {
  Scenario s;
  s.add(hif::GroundTruth::Static, hif::PointClass::Static, 10);
  s.add(hif::GroundTruth::Dynamic, hif::PointClass::Static, 10);
  const hif::AccuracyReport r = hif::score(s.pred, s.truth);
  CHECK(*r.sa == 100.0);
  CHECK(*r.da == 0.0);
  CHECK(*r.aa == 0.0);
}

TEST_CASE("absent denominators give absent metrics, never division") {
  Scenario statics_only;
  statics_only.add(hif::GroundTruth::Static, hif::PointClass::Static, 5);
  const hif::AccuracyReport r1 = hif::score(statics_only.pred,
                                            statics_only.truth);
  CHECK(r1.sa.has_value());
  CHECK_FALSE(r1.da.has_value());
  CHECK_FALSE(r1.aa.has_value());

  Scenario empty;
  const hif::AccuracyReport r2 = hif::score(empty.pred, empty.truth);
  CHECK_FALSE(r2.sa.has_value());
  CHECK_FALSE(r2.da.has_value());
  CHECK_FALSE(r2.aa.has_value());
}

TEST_CASE("score is permutation equivariant and satisfies aa^2 = sa*da") {
  hif::SplitMix64 rng(61);
  Scenario s;
  for (int i = 0; i < 500; ++i) {
    const auto t = static_cast<hif::GroundTruth>(rng.next_u64() % 3);
    const auto p = static_cast<hif::PointClass>(rng.next_u64() % 2);
    s.add(t, p, 1);
  }
  const hif::AccuracyReport base = hif::score(s.pred, s.truth);
  if (base.aa) {
    CHECK(std::abs(*base.aa * *base.aa - *base.sa * *base.da) <=
          1e-9 * std::abs(*base.sa * *base.da));
  }

  for (std::size_t i = s.pred.size(); i > 1; --i) {
    const std::size_t j = rng.next_u64() % i;
    std::swap(s.pred[i - 1], s.pred[j]);
    std::swap(s.truth[i - 1], s.truth[j]);
  }
  const hif::AccuracyReport shuffled = hif::score(s.pred, s.truth);
  CHECK(shuffled.sa == base.sa);
  CHECK(shuffled.da == base.da);
  CHECK(shuffled.aa == base.aa);
  CHECK(shuffled.retained_static == base.retained_static);
  CHECK(shuffled.excluded == base.excluded);
}

TEST_CASE("runtime statistics use the population deviation") {
  const std::vector<double> flat = {10.0, 10.0, 10.0};
  const hif::RuntimeReport r1 = hif::runtime_stats(flat);
  CHECK(r1.mean_ms == doctest::Approx(10.0));
  CHECK(r1.std_ms == doctest::Approx(0.0));
  CHECK(r1.fps == doctest::Approx(100.0));

  const std::vector<double> single = {11.62};
  const hif::RuntimeReport r2 = hif::runtime_stats(single);
  CHECK(r2.fps == doctest::Approx(1000.0 / 11.62));
  CHECK(std::abs(r2.fps - 86.06) < 0.005);

  const std::vector<double> two = {5.0, 15.0};
  const hif::RuntimeReport r3 = hif::runtime_stats(two);
  CHECK(r3.mean_ms == doctest::Approx(10.0));
  CHECK(r3.std_ms == doctest::Approx(5.0));
  CHECK(r3.fps == doctest::Approx(100.0));

  // fps = 1000 / mean within 1e-6 relative, for arbitrary samples.
  hif::SplitMix64 rng(62);
  std::vector<double> samples;
  for (int i = 0; i < 100; ++i) samples.push_back(1.0 + rng.next_double() * 50.0);
  const hif::RuntimeReport r4 = hif::runtime_stats(samples);
  CHECK(std::abs(r4.fps - 1000.0 / r4.mean_ms) <= 1e-6 * r4.fps);

  CHECK_THROWS_AS(hif::runtime_stats({}), hif::InternalError);
}

TEST_CASE("csv emission matches the golden fixture") {
  hif::AccuracyReport acc;
  acc.sa = 98.40;
  acc.da = 95.46;
  acc.aa = std::sqrt(98.40 * 95.46);
  acc.retained_static = 2460;
  acc.removed_static = 40;
  acc.removed_dynamic = 4773;
  acc.retained_dynamic = 227;
  acc.excluded = 3;
  hif::RuntimeReport rt;
  rt.mean_ms = 11.62;
  rt.std_ms = 0.878;
  rt.fps = 1000.0 / 11.62;
  rt.peak_memory_mb = std::nullopt;

  const std::string csv = hif::emit_report(acc, rt, hif::ReportFormat::Csv);
  CHECK(csv ==
        "sa_percent,da_percent,aa_percent,retained_static,removed_static,"
        "removed_dynamic,retained_dynamic,excluded,mean_ms,std_ms,fps,"
        "peak_memory_mb\n"
        "98.40,95.46,96.92,2460,40,4773,227,3,11.620,0.878,86.06,\n");
}

TEST_CASE("json emission round-trips and uses null for absent metrics") {
  hif::AccuracyReport acc;
  acc.sa = 100.0;
  acc.retained_static = 7;
  // da/aa absent.
  hif::RuntimeReport rt;
  rt.mean_ms = 4.0;
  rt.std_ms = 1.0;
  rt.fps = 250.0;
  rt.peak_memory_mb = std::nullopt;

  const std::string text = hif::emit_report(acc, rt, hif::ReportFormat::Json);
  const nlohmann::json parsed = nlohmann::json::parse(text);
  CHECK(parsed["accuracy"]["sa_percent"].get<double>() == 100.0);
  CHECK(parsed["accuracy"]["da_percent"].is_null());
  CHECK(parsed["accuracy"]["aa_percent"].is_null());
  CHECK(parsed["accuracy"]["retained_static"].get<std::uint64_t>() == 7);
  CHECK(parsed["runtime"]["mean_ms"].get<double>() == 4.0);
  CHECK(parsed["runtime"]["fps"].get<double>() == 250.0);
  CHECK(parsed["runtime"]["peak_memory_mb"].is_null());

  // Emission is deterministic.
  CHECK(text == hif::emit_report(acc, rt, hif::ReportFormat::Json));
}
