#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>

#include <CLI11.hpp>

#include "jhtrack/io.hpp"
#include "jhtrack/metrics.hpp"
#include "jhtrack/synth.hpp"
#include "jhtrack/tracker.hpp"
#include "jhtrack/tuner.hpp"

namespace {

using namespace jhtrack;

int run_track(const std::string& dets_path, const std::string& homog_path,
              const std::string& affines_path, const std::string& config_path,
              double fps, const std::string& out_path) {
  TrackerConfig cfg;
  if (!config_path.empty()) {
    cfg = read_config(config_path);
  }
  if (fps > 0.0) {
    cfg.dt = 1.0 / fps;
  }
  const auto detections = read_detections(dets_path);
  const Homography h0 = read_homography(homog_path);
  std::map<long, AffineMotion> affines;
  if (!affines_path.empty()) {
    affines = read_affines(affines_path);
  }
  const auto results = run_sequence(detections, h0, affines, cfg);
  write_results(out_path, results);
  return 0;
}

int run_synth(const std::string& scene_name, const std::string& out_dir,
              std::uint64_t seed, bool seed_set) {
  SceneSpec spec = named_scene(scene_name);
  if (seed_set) {
    spec.seed = seed;
  }
  const SyntheticScene scene = generate(spec);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_track_rows((dir / "gt.txt").string(), scene.gt, true);
  write_homography((dir / "homography.txt").string(), scene.h0);
  write_affines((dir / "affines.txt").string(), scene.affines);

  std::vector<TrackRow> det_rows;
  for (const auto& [frame, dets] : scene.detections) {
    for (const Detection& d : dets) {
      det_rows.push_back(TrackRow{frame, -1, d.box, d.conf});
    }
  }
  write_track_rows((dir / "detections.txt").string(), det_rows, false);
  std::cout << "wrote scene '" << scene_name << "' to " << out_dir << " ("
            << scene.gt.size() << " gt boxes, " << det_rows.size()
            << " detections, fps " << scene.fps << ")\n";
  return 0;
}

int run_eval(const std::string& gt_path, const std::string& res_path) {
  const auto gt = read_track_rows(gt_path);
  const auto res = read_track_rows(res_path);
  const MotaResult m = mota(gt, res);
  const Idf1Result f = idf1(gt, res);
  std::printf("MOTA %.6f\n", m.mota);
  std::printf("IDF1 %.6f\n", f.idf1);
  std::printf("TP %ld FN %ld FP %ld IDSW %ld GT %ld\n", m.tp, m.fn, m.fp,
              m.idsw, m.gt_total);
  return 0;
}

int run_tune(const std::string& config_path, const std::string& bounds_path,
             const std::string& metric, int max_iters,
             const std::string& out_config, const std::string& trace_path) {
  TrackerConfig base;
  if (!config_path.empty()) {
    base = read_config(config_path);
  }
  const SearchSpace space = bounds_path.empty()
                                ? default_search_space(base)
                                : read_search_space(bounds_path, base);
  const bool use_idf1 = metric == "idf1";

  // The benchmark scenes are generated once; only the config varies.
  std::vector<SyntheticScene> scenes;
  for (const SceneSpec& spec : benchmark_scenes()) {
    scenes.push_back(generate(spec));
  }
  const auto objective = [&](const std::vector<double>& point) {
    const TrackerConfig cfg = apply_point(base, space, point);
    double total = 0.0;
    for (const SyntheticScene& scene : scenes) {
      const std::vector<TrackRow> rows = track_scene(scene, cfg);
      total += use_idf1 ? idf1(scene.gt, rows).idf1 : mota(scene.gt, rows).mota;
    }
    return total / static_cast<double>(scenes.size());
  };

  const PatternSearchResult result = pattern_search(objective, space, max_iters);
  write_config(out_config, apply_point(base, space, result.best_point));
  write_trace(trace_path, space, result.trace);
  std::printf("best %s %.6f after %d iterations (%zu evaluations)\n",
              use_idf1 ? "IDF1" : "MOTA", result.best_value, result.iterations,
              result.trace.size());
  std::printf("tuned config written to %s, trace to %s\n", out_config.c_str(),
              trace_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ground-plane multi-object tracker"};
  app.require_subcommand(1);

  auto* track = app.add_subcommand("track", "run the tracker on a sequence");
  std::string dets, homog, affines, config, out;
  double fps = 0.0;
  track->add_option("--dets", dets, "detection csv")->required();
  track->add_option("--homography", homog, "initial homography file")->required();
  track->add_option("--affines", affines, "per-frame camera motion file");
  track->add_option("--config", config, "tracker config file");
  track->add_option("--fps", fps, "frame rate (sets dt = 1/fps)");
  track->add_option("--out", out, "output result csv")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic scene");
  std::string scene_name, out_dir;
  std::uint64_t seed = 0;
  synth->add_option("--scene", scene_name, "scene name")->required();
  synth->add_option("--out-dir", out_dir, "output directory")->required();
  auto* seed_opt = synth->add_option("--seed", seed, "override the scene seed");

  auto* eval = app.add_subcommand("eval", "score results against ground truth");
  std::string gt_path, res_path;
  eval->add_option("--gt", gt_path, "ground truth csv")->required();
  eval->add_option("--res", res_path, "result csv")->required();

  auto* tune = app.add_subcommand("tune", "pattern-search parameter tuning");
  std::string tune_config, bounds, metric = "mota";
  std::string out_config = "tuned_config.txt", trace_path = "tune_trace.csv";
  int max_iters = 200;
  tune->add_option("--config-init", tune_config, "starting config file");
  tune->add_option("--bounds", bounds, "search space file");
  tune->add_option("--metric", metric, "objective metric")
      ->check(CLI::IsMember({"mota", "idf1"}));
  tune->add_option("--max-iters", max_iters, "iteration budget");
  tune->add_option("--out-config", out_config, "tuned config output path");
  tune->add_option("--trace", trace_path, "evaluation trace csv path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (track->parsed()) {
      return run_track(dets, homog, affines, config, fps, out);
    }
    if (synth->parsed()) {
      return run_synth(scene_name, out_dir, seed, seed_opt->count() > 0);
    }
    if (eval->parsed()) {
      return run_eval(gt_path, res_path);
    }
    if (tune->parsed()) {
      return run_tune(tune_config, bounds, metric, max_iters, out_config,
                      trace_path);
    }
  } catch (const jhtrack::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const jhtrack::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const jhtrack::InvalidThresholds& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const jhtrack::InvalidSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const jhtrack::TrackingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
