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

#include "hif/global_map.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hif/interval_builder.hpp"

namespace hif {

namespace {

constexpr char kMagic[4] = {'H', 'I', 'F', 'M'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void put_i64(std::string& out, std::int64_t v) {
  put_u64(out, static_cast<std::uint64_t>(v));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& path)
      : bytes_(bytes), path_(path) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }

  void raw(char* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }

  void done() const {
    if (pos_ != bytes_.size()) {
      throw DataError("map file " + path_ + ": trailing bytes at offset " +
                      std::to_string(pos_));
    }
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw DataError("map file " + path_ + ": truncated at offset " +
                      std::to_string(pos_));
    }
  }

  const std::string& bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

double squared_range(const Point3& p, const Eigen::Vector3d& origin) {
  const double dx = p.x - origin.x();
  const double dy = p.y - origin.y();
  const double dz = p.z - origin.z();
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

GlobalHeightMap::GlobalHeightMap(HifConfig cfg) : cfg_(cfg) {
  cfg_.validate();
}

ScanTiming GlobalHeightMap::integrate_scan(const ScanFrame& scan) {
  const auto start = std::chrono::steady_clock::now();
  if (scan.index <= last_scan_) {
    throw InternalError("integrate_scan: scan index " +
                        std::to_string(scan.index) +
                        " not greater than last integrated " +
                        std::to_string(last_scan_));
  }

  ScanFrame world;
  const bool sensor_frame =
      !scan.points.empty() && scan.points.front().frame == Frame::Sensor;
  if (sensor_frame) {
    world = transform_to_world(scan, &diag_);
  } else {
    world = scan;
  }

  if (cfg_.max_range > 0.0 || cfg_.min_range > 0.0) {
    const double max_sq = cfg_.max_range * cfg_.max_range;
    const double min_sq = cfg_.min_range * cfg_.min_range;
    std::vector<Point3> kept;
    kept.reserve(world.points.size());
    for (const Point3& p : world.points) {
      const double r2 = squared_range(p, scan.pose.translation);
      if ((cfg_.max_range > 0.0 && r2 > max_sq) ||
          (cfg_.min_range > 0.0 && r2 < min_sq)) {
        ++diag_.range_filtered;
        continue;
      }
      kept.push_back(p);
    }
    world.points = std::move(kept);
    world.labels.clear();
  }

  LocalPillarSet local = build_local_pillars(world, cfg_);
  for (auto& [key, pillar] : local) {
    auto it = table_.find(key);
    if (it == table_.end()) {
      table_.emplace(key, insert_pillar(pillar, cfg_));
      continue;
    }
    try {
      Pillar fused = fuse_pillar(pillar, it->second, cfg_);
      if (fused.intervals.empty()) {
        table_.erase(it);  // only non-empty pillars persist
      } else {
        it->second = std::move(fused);
      }
    } catch (const InternalError&) {
      ++diag_.fuse_aborts;  // leave the global pillar untouched
    }
  }

  last_scan_ = scan.index;
  ++scan_count_;

  const auto end = std::chrono::steady_clock::now();
  const double ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  return ScanTiming{scan.index, ms};
}

PointClass GlobalHeightMap::classify_point(const Point3& point) const {
  const auto [m, n] = pillar_offset(point, cfg_);
  const auto it = table_.find(make_pillar_key(m, n));
  if (it == table_.end()) return PointClass::Dynamic;
  const double lo = point.z - cfg_.containment_tolerance;
  const double hi = point.z + cfg_.containment_tolerance;
  for (const HeightInterval& h : it->second.intervals) {
    if (h.b > hi) break;  // sorted by b
    if (h.t >= lo && h.p >= cfg_.static_threshold) return PointClass::Static;
  }
  return PointClass::Dynamic;
}

std::vector<PointClass> GlobalHeightMap::classify_cloud(
    std::span<const Point3> points) const {
  std::vector<PointClass> out;
  out.reserve(points.size());
  for (const Point3& p : points) out.push_back(classify_point(p));
  return out;
}

const Pillar* GlobalHeightMap::find(std::int64_t m, std::int64_t n) const {
  const auto it = table_.find(make_pillar_key(m, n));
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<PillarKey> GlobalHeightMap::sorted_keys() const {
  std::vector<PillarKey> keys;
  keys.reserve(table_.size());
  for (const auto& [key, pillar] : table_) keys.push_back(key);
  std::sort(keys.begin(), keys.end(), [](const PillarKey& a,
                                         const PillarKey& b) {
    return a.m != b.m ? a.m < b.m : a.n < b.n;
  });
  return keys;
}

void GlobalHeightMap::save(const std::string& path) const {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  put_f64(out, cfg_.origin_x);
  put_f64(out, cfg_.origin_y);
  put_f64(out, cfg_.dx);
  put_f64(out, cfg_.dy);
  put_f64(out, cfg_.alpha);
  put_f64(out, cfg_.beta);
  put_f64(out, cfg_.gap_threshold);
  put_f64(out, cfg_.containment_tolerance);
  put_f64(out, cfg_.static_threshold);
  put_f64(out, cfg_.p_init);
  put_f64(out, cfg_.clip_lo);
  put_f64(out, cfg_.clip_hi);
  put_f64(out, cfg_.compaction_epsilon);
  put_f64(out, cfg_.max_range);
  put_f64(out, cfg_.min_range);
  out.push_back(cfg_.lhp_enabled ? 1 : 0);
  put_i64(out, last_scan_);
  put_i64(out, scan_count_);

  const std::vector<PillarKey> keys = sorted_keys();
  put_u64(out, keys.size());
  for (const PillarKey& key : keys) {
    const Pillar& pillar = table_.at(key);
    put_i64(out, key.m);
    put_i64(out, key.n);
    put_f64(out, pillar.p_empty);
    put_u64(out, pillar.intervals.size());
    for (const HeightInterval& h : pillar.intervals) {
      put_f64(out, h.b);
      put_f64(out, h.t);
      put_f64(out, h.p);
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot open map file for writing: " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw DataError("failed writing map file: " + path);
}

GlobalHeightMap GlobalHeightMap::load(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot open map file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(file)),
                    std::istreambuf_iterator<char>());
  Reader r(bytes, path);

  char magic[4];
  r.raw(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("map file " + path + ": bad magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw DataError("map file " + path + ": unsupported version " +
                    std::to_string(version));
  }

  HifConfig cfg;
  cfg.origin_x = r.f64();
  cfg.origin_y = r.f64();
  cfg.dx = r.f64();
  cfg.dy = r.f64();
  cfg.alpha = r.f64();
  cfg.beta = r.f64();
  cfg.gap_threshold = r.f64();
  cfg.containment_tolerance = r.f64();
  cfg.static_threshold = r.f64();
  cfg.p_init = r.f64();
  cfg.clip_lo = r.f64();
  cfg.clip_hi = r.f64();
  cfg.compaction_epsilon = r.f64();
  cfg.max_range = r.f64();
  cfg.min_range = r.f64();
  cfg.lhp_enabled = r.u8() != 0;

  GlobalHeightMap map(cfg);
  map.last_scan_ = r.i64();
  map.scan_count_ = r.i64();

  const std::uint64_t count = r.u64();
  map.table_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::int64_t m = r.i64();
    const std::int64_t n = r.i64();
    Pillar pillar;
    pillar.p_empty = r.f64();
    const std::uint64_t k = r.u64();
    pillar.intervals.reserve(k);
    for (std::uint64_t j = 0; j < k; ++j) {
      HeightInterval h;
      h.b = r.f64();
      h.t = r.f64();
      h.p = r.f64();
      pillar.intervals.push_back(h);
    }
    try {
      check_pillar(pillar, "map load");
    } catch (const InternalError& e) {
      throw DataError("map file " + path + ": " + e.what());
    }
    if (pillar.intervals.empty()) {
      throw DataError("map file " + path + ": empty pillar record");
    }
    map.table_.emplace(make_pillar_key(m, n), std::move(pillar));
  }
  r.done();
  return map;
}

}  // namespace hif
