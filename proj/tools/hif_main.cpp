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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hif/pipeline.hpp"
#include "hif/synthetic.hpp"

namespace {

namespace fs = std::filesystem;

// Files created by the current command; removed again if it fails so no
// partial outputs survive.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (committed_) return;
    for (const std::string& path : files_) {
      std::error_code ec;
      fs::remove(path, ec);
    }
  }
  std::string track(const std::string& path) {
    files_.push_back(path);
    return path;
  }
  void commit() { committed_ = true; }

 private:
  std::vector<std::string> files_;
  bool committed_ = false;
};

struct CommandOptions {
  std::string config_path;
  std::string out_dir;
  bool no_lhp = false;
  bool online = false;
  std::optional<std::uint64_t> seed;
  std::string format;  // empty = both
  int reps = 3;
  int warmup = 1;
};

hif::PipelineOverrides make_overrides(const CommandOptions& opts) {
  hif::PipelineOverrides overrides;
  if (opts.no_lhp) overrides.lhp_enabled = false;
  overrides.seed = opts.seed;
  return overrides;
}

void write_text(OutputGuard& guard, const std::string& path,
                const std::string& text) {
  std::ofstream file(guard.track(path), std::ios::trunc);
  if (!file) throw hif::DataError("cannot open for writing: " + path);
  file << text;
  if (!file) throw hif::DataError("failed writing: " + path);
}

void write_reports(OutputGuard& guard, const std::string& out_dir,
                   const std::optional<hif::AccuracyReport>& acc,
                   const std::optional<hif::RuntimeReport>& rt,
                   const std::string& format) {
  if (format.empty() || format == "csv") {
    write_text(guard, (fs::path(out_dir) / "report.csv").string(),
               hif::emit_report(acc, rt, hif::ReportFormat::Csv));
  }
  if (format.empty() || format == "json") {
    write_text(guard, (fs::path(out_dir) / "report.json").string(),
               hif::emit_report(acc, rt, hif::ReportFormat::Json));
  }
}

void write_timing_csv(OutputGuard& guard, const std::string& path,
                      const std::vector<hif::ScanTiming>& timings) {
  std::string text = "scan_index,ms\n";
  char buf[64];
  for (const hif::ScanTiming& t : timings) {
    std::snprintf(buf, sizeof(buf), "%lld,%.3f\n",
                  static_cast<long long>(t.scan_index), t.millis);
    text += buf;
  }
  write_text(guard, path, text);
}

void write_cleaned_cloud(OutputGuard& guard, const std::string& path,
                         const std::vector<hif::Point3>& cloud,
                         const std::vector<hif::PointClass>& classes) {
  std::vector<hif::Point3> kept;
  kept.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (classes[i] == hif::PointClass::Static) kept.push_back(cloud[i]);
  }
  hif::write_scan_bin(guard.track(path), kept);
}

void print_runtime(const hif::RuntimeReport& rt) {
  std::printf("runtime: mean %.3f ms, std %.3f ms, %.2f fps", rt.mean_ms,
              rt.std_ms, rt.fps);
  if (rt.peak_memory_mb) std::printf(", peak memory %.2f MB",
                                     *rt.peak_memory_mb);
  std::printf("\n");
}

void print_accuracy(const hif::AccuracyReport& acc) {
  auto text = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *v);
    return std::string(buf);
  };
  std::printf("accuracy: SA %s%%  DA %s%%  AA %s%%\n", text(acc.sa).c_str(),
              text(acc.da).c_str(), text(acc.aa).c_str());
  std::printf(
      "counts: %llu static kept, %llu static removed, %llu dynamic removed, "
      "%llu dynamic kept, %llu excluded\n",
      static_cast<unsigned long long>(acc.retained_static),
      static_cast<unsigned long long>(acc.removed_static),
      static_cast<unsigned long long>(acc.removed_dynamic),
      static_cast<unsigned long long>(acc.retained_dynamic),
      static_cast<unsigned long long>(acc.excluded));
}

void print_diagnostics(const hif::GlobalHeightMap& map) {
  const hif::IngestDiagnostics& d = map.diagnostics();
  if (d.nonfinite_points || d.nonfinite_transformed || d.range_filtered ||
      d.fuse_aborts) {
    std::printf(
        "diagnostics: %llu non-finite, %llu non-finite after transform, "
        "%llu range-filtered, %llu fuse aborts\n",
        static_cast<unsigned long long>(d.nonfinite_points),
        static_cast<unsigned long long>(d.nonfinite_transformed),
        static_cast<unsigned long long>(d.range_filtered),
        static_cast<unsigned long long>(d.fuse_aborts));
  }
}

void cmd_run(const CommandOptions& opts) {
  const hif::RunConfig config = hif::load_config(opts.config_path);
  fs::create_directories(opts.out_dir);
  OutputGuard guard;

  if (opts.online) {
    // Online mode: classify each scan against the map right after it is
    // integrated and emit one cleaned scan per frame.
    hif::HifConfig cfg = config.hif;
    if (opts.no_lhp) cfg.lhp_enabled = false;
    const std::vector<hif::ScanFrame> frames =
        hif::load_frames(config, make_overrides(opts), false);
    hif::GlobalHeightMap map(cfg);
    std::vector<hif::ScanTiming> timings;
    std::vector<double> per_scan_ms;
    const fs::path online_dir = fs::path(opts.out_dir) / "online";
    fs::create_directories(online_dir);
    for (const hif::ScanFrame& frame : frames) {
      const hif::ScanTiming timing = map.integrate_scan(frame);
      timings.push_back(timing);
      per_scan_ms.push_back(timing.millis);
      const hif::ScanFrame world = hif::transform_to_world(frame);
      const auto classes = map.classify_cloud(world.points);
      char name[32];
      std::snprintf(name, sizeof(name), "cleaned_%06lld.bin",
                    static_cast<long long>(frame.index));
      write_cleaned_cloud(guard, (online_dir / name).string(), world.points,
                          classes);
    }
    map.save(guard.track((fs::path(opts.out_dir) / "map.hifmap").string()));
    write_timing_csv(guard, (fs::path(opts.out_dir) / "timing.csv").string(),
                     timings);
    const hif::RuntimeReport rt = hif::runtime_stats(per_scan_ms);
    write_reports(guard, opts.out_dir, std::nullopt, rt, opts.format);
    std::printf("integrated %zu scans, %zu pillars\n", timings.size(),
                map.pillar_count());
    print_runtime(rt);
    print_diagnostics(map);
    guard.commit();
    return;
  }

  const hif::PipelineResult result =
      hif::run_pipeline(config, make_overrides(opts), false);
  write_cleaned_cloud(guard,
                      (fs::path(opts.out_dir) / "cleaned_map.bin").string(),
                      result.cloud, result.classes);
  result.map->save(
      guard.track((fs::path(opts.out_dir) / "map.hifmap").string()));
  write_timing_csv(guard, (fs::path(opts.out_dir) / "timing.csv").string(),
                   result.timings);
  const hif::RuntimeReport rt = hif::runtime_stats(result.per_scan_ms);
  write_reports(guard, opts.out_dir, std::nullopt, rt, opts.format);

  std::printf("integrated %zu scans, %zu pillars, %zu points\n",
              result.timings.size(), result.map->pillar_count(),
              result.cloud.size());
  print_runtime(rt);
  print_diagnostics(*result.map);
  guard.commit();
}

void cmd_eval(const CommandOptions& opts) {
  const hif::RunConfig config = hif::load_config(opts.config_path);
  fs::create_directories(opts.out_dir);
  OutputGuard guard;

  const hif::PipelineResult result =
      hif::run_pipeline(config, make_overrides(opts), true);
  const hif::AccuracyReport acc = hif::score(result.classes, result.truth);
  const hif::RuntimeReport rt = hif::runtime_stats(result.per_scan_ms);

  write_cleaned_cloud(guard,
                      (fs::path(opts.out_dir) / "cleaned_map.bin").string(),
                      result.cloud, result.classes);
  result.map->save(
      guard.track((fs::path(opts.out_dir) / "map.hifmap").string()));
  write_timing_csv(guard, (fs::path(opts.out_dir) / "timing.csv").string(),
                   result.timings);
  write_reports(guard, opts.out_dir, acc, rt, opts.format);

  std::printf("integrated %zu scans, %zu pillars, %zu points\n",
              result.timings.size(), result.map->pillar_count(),
              result.cloud.size());
  print_accuracy(acc);
  print_runtime(rt);
  print_diagnostics(*result.map);
  guard.commit();
}

void cmd_bench(const CommandOptions& opts) {
  if (opts.reps < 1) {
    throw hif::ConfigError("bench repetitions must be >= 1");
  }
  if (opts.warmup < 0) {
    throw hif::ConfigError("bench warmup must be >= 0");
  }
  const hif::RunConfig config = hif::load_config(opts.config_path);
  hif::HifConfig cfg = config.hif;
  if (opts.no_lhp) cfg.lhp_enabled = false;
  const std::vector<hif::ScanFrame> frames =
      hif::load_frames(config, make_overrides(opts), false);
  if (frames.empty()) throw hif::DataError("bench: no frames in range");

  fs::create_directories(opts.out_dir);
  OutputGuard guard;

  for (int w = 0; w < opts.warmup; ++w) {
    hif::run_integration_only(cfg, frames);  // excluded from statistics
  }

  std::vector<double> pooled;
  std::string csv = "repetition,mean_ms,std_ms,fps\n";
  nlohmann::ordered_json reps_json = nlohmann::ordered_json::array();
  char buf[128];
  for (int rep = 0; rep < opts.reps; ++rep) {
    const std::vector<double> ms = hif::run_integration_only(cfg, frames);
    pooled.insert(pooled.end(), ms.begin(), ms.end());
    const hif::RuntimeReport rt = hif::runtime_stats(ms);
    std::snprintf(buf, sizeof(buf), "%d,%.3f,%.3f,%.2f\n", rep + 1, rt.mean_ms,
                  rt.std_ms, rt.fps);
    csv += buf;
    nlohmann::ordered_json r;
    r["repetition"] = rep + 1;
    r["mean_ms"] = rt.mean_ms;
    r["std_ms"] = rt.std_ms;
    r["fps"] = rt.fps;
    reps_json.push_back(r);
    std::printf("repetition %d/%d: ", rep + 1, opts.reps);
    print_runtime(rt);
  }
  // Pooled statistics over all per-scan samples; fps comes from the pooled
  // mean, not from averaging per-repetition fps.
  const hif::RuntimeReport pooled_rt = hif::runtime_stats(pooled);
  std::snprintf(buf, sizeof(buf), "pooled,%.3f,%.3f,%.2f\n", pooled_rt.mean_ms,
                pooled_rt.std_ms, pooled_rt.fps);
  csv += buf;

  if (opts.format.empty() || opts.format == "csv") {
    write_text(guard, (fs::path(opts.out_dir) / "bench.csv").string(), csv);
  }
  if (opts.format.empty() || opts.format == "json") {
    nlohmann::ordered_json j;
    j["repetitions"] = reps_json;
    nlohmann::ordered_json p;
    p["mean_ms"] = pooled_rt.mean_ms;
    p["std_ms"] = pooled_rt.std_ms;
    p["fps"] = pooled_rt.fps;
    if (pooled_rt.peak_memory_mb) {
      p["peak_memory_mb"] = *pooled_rt.peak_memory_mb;
    } else {
      p["peak_memory_mb"] = nullptr;
    }
    j["pooled"] = p;
    write_text(guard, (fs::path(opts.out_dir) / "bench.json").string(),
               j.dump(2) + "\n");
  }
  std::printf("pooled: ");
  print_runtime(pooled_rt);
  guard.commit();
}

void cmd_ablate(const CommandOptions& opts) {
  const hif::RunConfig config = hif::load_config(opts.config_path);
  fs::create_directories(opts.out_dir);
  OutputGuard guard;

  std::optional<hif::AccuracyReport> reports[2];
  const bool lhp_values[2] = {true, false};
  const char* names[2] = {"lhp_on", "lhp_off"};
  for (int i = 0; i < 2; ++i) {
    hif::PipelineOverrides overrides = make_overrides(opts);
    overrides.lhp_enabled = lhp_values[i];
    const hif::PipelineResult result =
        hif::run_pipeline(config, overrides, true);
    const hif::AccuracyReport acc = hif::score(result.classes, result.truth);
    const hif::RuntimeReport rt = hif::runtime_stats(result.per_scan_ms);
    const fs::path sub = fs::path(opts.out_dir) / names[i];
    fs::create_directories(sub);
    write_reports(guard, sub.string(), acc, rt, opts.format);
    std::printf("%s:\n", names[i]);
    print_accuracy(acc);
    reports[i] = acc;
  }

  auto field = [](const std::optional<double>& v) {
    if (!v) return std::string();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *v);
    return std::string(buf);
  };
  auto delta = [](const std::optional<double>& a,
                  const std::optional<double>& b) -> std::optional<double> {
    if (!a || !b) return std::nullopt;
    return *a - *b;
  };
  const auto d_sa = delta(reports[0]->sa, reports[1]->sa);
  const auto d_da = delta(reports[0]->da, reports[1]->da);
  const auto d_aa = delta(reports[0]->aa, reports[1]->aa);

  std::string csv = "mode,sa_percent,da_percent,aa_percent\n";
  csv += "with_lhp," + field(reports[0]->sa) + "," + field(reports[0]->da) +
         "," + field(reports[0]->aa) + "\n";
  csv += "without_lhp," + field(reports[1]->sa) + "," + field(reports[1]->da) +
         "," + field(reports[1]->aa) + "\n";
  csv += "delta," + field(d_sa) + "," + field(d_da) + "," + field(d_aa) + "\n";
  if (opts.format.empty() || opts.format == "csv") {
    write_text(guard, (fs::path(opts.out_dir) / "ablation.csv").string(), csv);
  }
  if (opts.format.empty() || opts.format == "json") {
    auto entry = [](const hif::AccuracyReport& acc) {
      nlohmann::ordered_json e;
      e["sa_percent"] = acc.sa ? nlohmann::json(*acc.sa) : nlohmann::json();
      e["da_percent"] = acc.da ? nlohmann::json(*acc.da) : nlohmann::json();
      e["aa_percent"] = acc.aa ? nlohmann::json(*acc.aa) : nlohmann::json();
      return e;
    };
    nlohmann::ordered_json j;
    j["with_lhp"] = entry(*reports[0]);
    j["without_lhp"] = entry(*reports[1]);
    nlohmann::ordered_json d;
    d["sa_percent"] = d_sa ? nlohmann::json(*d_sa) : nlohmann::json();
    d["da_percent"] = d_da ? nlohmann::json(*d_da) : nlohmann::json();
    d["aa_percent"] = d_aa ? nlohmann::json(*d_aa) : nlohmann::json();
    j["delta"] = d;
    write_text(guard, (fs::path(opts.out_dir) / "ablation.json").string(),
               j.dump(2) + "\n");
  }
  if (d_sa && d_da) {
    std::printf("delta (with - without): SA %+.2f  DA %+.2f\n", *d_sa, *d_da);
  }
  guard.commit();
}

void cmd_synth(const std::string& scene_path, const std::string& out_dir,
               const std::optional<std::uint64_t>& seed) {
  const hif::SceneSpec spec = hif::parse_scene(scene_path);
  const std::uint64_t chosen = seed.value_or(spec.seed);
  const std::vector<hif::ScanFrame> frames = hif::gen_scene(spec, chosen);

  const fs::path root(out_dir);
  fs::create_directories(root / "velodyne");
  fs::create_directories(root / "labels");
  OutputGuard guard;

  std::vector<hif::RigidPose> poses;
  poses.reserve(frames.size());
  char name[32];
  for (const hif::ScanFrame& frame : frames) {
    std::snprintf(name, sizeof(name), "%06lld.bin",
                  static_cast<long long>(frame.index));
    hif::write_scan_bin(guard.track((root / "velodyne" / name).string()),
                        frame.points);
    std::snprintf(name, sizeof(name), "%06lld.label",
                  static_cast<long long>(frame.index));
    hif::write_labels(guard.track((root / "labels" / name).string()),
                      frame.labels);
    poses.push_back(frame.pose);
  }
  hif::write_poses(guard.track((root / "poses.txt").string()), poses);

  std::string cfg_text;
  cfg_text += "scan_dir = " + (root / "velodyne").string() + "\n";
  cfg_text += "pose_file = " + (root / "poses.txt").string() + "\n";
  cfg_text += "label_dir = " + (root / "labels").string() + "\n";
  cfg_text += "frame_start = 0\n";
  cfg_text += "frame_end = " + std::to_string(frames.size() - 1) + "\n";
  write_text(guard, (root / "sequence.cfg").string(), cfg_text);

  std::printf("wrote %zu frames to %s (seed %llu)\n", frames.size(),
              out_dir.c_str(), static_cast<unsigned long long>(chosen));
  guard.commit();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"height-interval map cleaning: pillar-based probabilistic "
               "removal of dynamic points from LiDAR maps"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string scene_path;

  auto add_common = [&opts](CLI::App* cmd, bool with_lhp, bool with_seed,
                            bool with_format) {
    cmd->add_option("--config", opts.config_path, "run configuration file")
        ->required();
    cmd->add_option("--out", opts.out_dir, "output directory")->required();
    if (with_lhp) {
      cmd->add_flag("--no-lhp", opts.no_lhp,
                    "disable low-height preservation");
    }
    if (with_seed) {
      cmd->add_option("--seed", opts.seed, "override the synthetic seed");
    }
    if (with_format) {
      cmd->add_option("--format", opts.format, "report format")
          ->check(CLI::IsMember({"csv", "json"}));
    }
  };

  CLI::App* run = app.add_subcommand(
      "run", "integrate a sequence and write the cleaned map");
  add_common(run, true, true, true);
  run->add_flag("--online", opts.online,
                "also classify each scan online against the live map");

  CLI::App* eval = app.add_subcommand(
      "eval", "run plus point-level accuracy scoring against labels");
  add_common(eval, true, true, true);

  CLI::App* bench =
      app.add_subcommand("bench", "repeat integration and report runtimes");
  add_common(bench, true, true, true);
  bench->add_option("--reps", opts.reps, "number of repetitions")
      ->default_val(3);
  bench->add_option("--warmup", opts.warmup,
                    "warm-up repetitions excluded from statistics")
      ->default_val(1);

  CLI::App* ablate = app.add_subcommand(
      "ablate", "evaluate with and without low-height preservation");
  add_common(ablate, false, true, true);

  CLI::App* synth = app.add_subcommand(
      "synth", "materialize a synthetic scene in the dataset format");
  synth->add_option("--scene", scene_path, "scene description file")
      ->required();
  synth->add_option("--out", opts.out_dir, "output directory")->required();
  synth->add_option("--seed", opts.seed, "override the scene seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) cmd_run(opts);
    else if (eval->parsed()) cmd_eval(opts);
    else if (bench->parsed()) cmd_bench(opts);
    else if (ablate->parsed()) cmd_ablate(opts);
    else if (synth->parsed()) cmd_synth(scene_path, opts.out_dir, opts.seed);
  } catch (const hif::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const hif::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
