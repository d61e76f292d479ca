#include "jhtrack/synth.hpp"

#include <cmath>
#include <numbers>

namespace jhtrack {

std::uint64_t SplitMix64::mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

void SplitMix64::gaussian_pair(double& n1, double& n2) {
  double u1 = uniform();
  if (u1 <= 0.0) {
    u1 = 0x1.0p-53;
  }
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  n1 = r * std::cos(theta);
  n2 = r * std::sin(theta);
}

namespace {

bool in_window(long f, long first, long last) {
  return f >= first && f <= last;
}

// Stream for one (seed, agent, frame) cell.
SplitMix64 cell_stream(std::uint64_t seed, int agent, long frame) {
  const std::uint64_t a = SplitMix64::mix(seed ^ 0x7f4a7c15ULL);
  const std::uint64_t b =
      SplitMix64::mix(a ^ (static_cast<std::uint64_t>(agent) * 0x9e3779b9ULL));
  return SplitMix64(SplitMix64::mix(b ^ static_cast<std::uint64_t>(frame)));
}

}  // namespace

SyntheticScene generate(const SceneSpec& spec) {
  if (spec.frames < 1) {
    throw InvalidSpec("scene needs at least one frame");
  }
  if (spec.agents.empty()) {
    throw InvalidSpec("scene needs at least one agent");
  }
  if (spec.fps <= 0.0) {
    throw InvalidSpec("frame rate must be positive");
  }
  if (spec.dropout < 0.0 || spec.dropout >= 1.0) {
    throw InvalidSpec("dropout probability must lie in [0, 1)");
  }
  for (const auto& a : spec.agents) {
    if (a.width_m <= 0.0 || a.height_m <= 0.0) {
      throw InvalidSpec("agent box size must be positive");
    }
  }

  Eigen::Matrix3d h0m;
  h0m << spec.scale_x, 0.0, spec.offset_x,
      0.0, spec.scale_y, spec.offset_y,
      0.0, spec.perspective, 1.0;

  SyntheticScene scene;
  scene.h0 = Homography(h0m);
  scene.fps = spec.fps;
  const double dt = 1.0 / spec.fps;

  // Scripted camera: identity on the first frame, then per-frame motion.
  AffineMotion pan;
  pan.a << 1, 0, spec.pan_px, 0, 1, 0;
  Homography h = scene.h0;
  for (long f = 1; f <= spec.frames; ++f) {
    AffineMotion motion;  // identity
    if (f > 1 && spec.camera == CameraScript::kPan) {
      motion = pan;
    }
    scene.affines[f] = motion;
    if (f > 1) {
      h = apply_affine(motion, h);
    }

    for (int ai = 0; ai < static_cast<int>(spec.agents.size()); ++ai) {
      const AgentSpec& agent = spec.agents[ai];
      const long last = agent.last_frame < 0 ? spec.frames : agent.last_frame;
      if (f < agent.first_frame || f > last) {
        continue;
      }
      bool occluded = false;
      double conf_penalty = 0.0;
      for (const auto& occ : spec.occlusions) {
        if (occ.agent == ai && in_window(f, occ.first_frame, occ.last_frame)) {
          if (occ.penalty >= 1.0) {
            occluded = true;
          } else {
            conf_penalty = std::max(conf_penalty, occ.penalty);
          }
        }
      }
      if (occluded) {
        continue;
      }

      const GroundPoint pos =
          agent.start + agent.velocity * (static_cast<double>(f - 1) * dt);
      const ImagePoint bc = project(h, pos);
      const Eigen::Matrix2d jg = jacobian_ground(h, pos);
      const double scale = std::sqrt(std::abs(jg.determinant()));
      const double w_px = agent.width_m * scale;
      const double h_px = agent.height_m * scale;

      BBox box{bc.x() - 0.5 * w_px, bc.y() - h_px, bc.x() + 0.5 * w_px, bc.y()};
      for (const auto& jump : spec.jumps) {
        if (jump.agent == ai && in_window(f, jump.first_frame, jump.last_frame)) {
          box.t -= jump.offset_px;
          box.b -= jump.offset_px;
        }
      }
      scene.gt.push_back(TrackRow{f, ai + 1, box, 1.0});

      // Detection channel: per-cell stream, draws in a fixed order.
      SplitMix64 rng = cell_stream(spec.seed, ai, f);
      double nx = 0.0;
      double ny = 0.0;
      rng.gaussian_pair(nx, ny);
      const double u_drop = rng.uniform();
      const double u_conf = rng.uniform();
      if (u_drop < spec.dropout) {
        continue;
      }
      BBox det = box;
      det.l += spec.noise_px * nx;
      det.r += spec.noise_px * nx;
      det.t += spec.noise_px * ny;
      det.b += spec.noise_px * ny;
      const double conf =
          std::max(0.0, spec.base_conf - spec.conf_jitter * u_conf - conf_penalty);
      scene.detections[f].push_back(Detection{det, conf});
    }
    // Every frame appears in the detection map so downstream consumers see
    // the full frame range even when all agents drop out.
    scene.detections.try_emplace(f);
  }
  return scene;
}

std::vector<SceneSpec> benchmark_scenes() {
  std::vector<SceneSpec> scenes;

  SceneSpec crossing;
  crossing.name = "crossing";
  crossing.frames = 150;
  crossing.seed = 11;
  crossing.camera = CameraScript::kPan;
  crossing.pan_px = 2.0;
  crossing.noise_px = 2.5;
  crossing.dropout = 0.2;
  crossing.agents = {
      AgentSpec{{-5.0, 4.0}, {1.4, 0.8}},
      AgentSpec{{5.0, 10.0}, {-1.4, -0.8}},
      AgentSpec{{-4.0, 12.0}, {1.2, -0.9}},
      AgentSpec{{4.0, 5.0}, {-1.1, 0.9}},
      AgentSpec{{0.0, 14.0}, {0.0, -1.2}},
      AgentSpec{{-2.5, 7.0}, {1.3, 0.0}},
  };
  scenes.push_back(crossing);

  SceneSpec occluded;
  occluded.name = "occluded";
  occluded.frames = 150;
  occluded.seed = 23;
  occluded.camera = CameraScript::kPan;
  occluded.pan_px = 1.5;
  occluded.noise_px = 2.0;
  occluded.dropout = 0.1;
  occluded.agents = {
      AgentSpec{{-4.0, 6.0}, {1.2, 0.3}},
      AgentSpec{{3.0, 9.0}, {-1.0, -0.3}},
      AgentSpec{{0.0, 5.0}, {0.6, 0.8}},
      AgentSpec{{-3.0, 12.0}, {1.0, -0.6}},
  };
  occluded.occlusions = {
      OcclusionEvent{0, 60, 72, 1.0},
      OcclusionEvent{2, 95, 104, 1.0},
  };
  scenes.push_back(occluded);

  return scenes;
}

SceneSpec named_scene(const std::string& name) {
  for (const SceneSpec& spec : benchmark_scenes()) {
    if (spec.name == name) {
      return spec;
    }
  }
  if (name == "pan") {
    SceneSpec spec;
    spec.name = "pan";
    spec.frames = 300;
    spec.seed = 7;
    spec.camera = CameraScript::kPan;
    spec.pan_px = 2.0;
    spec.noise_px = 1.0;
    spec.dropout = 0.1;
    spec.agents = {
        AgentSpec{{-5.0, 4.0}, {1.0, 0.45}},
        AgentSpec{{5.0, 12.0}, {-1.0, -0.45}},
        AgentSpec{{-4.0, 10.0}, {0.9, -0.3}},
        AgentSpec{{4.0, 5.0}, {-0.8, 0.4}},
        AgentSpec{{0.0, 15.0}, {0.2, -0.6}},
    };
    return spec;
  }
  if (name == "static") {
    SceneSpec spec = named_scene("pan");
    spec.name = "static";
    spec.camera = CameraScript::kStatic;
    return spec;
  }
  if (name == "jump") {
    SceneSpec spec;
    spec.name = "jump";
    spec.frames = 120;
    spec.seed = 5;
    spec.camera = CameraScript::kStatic;
    spec.noise_px = 0.8;
    spec.agents = {
        AgentSpec{{-4.0, 5.0}, {0.8, 0.2}},
        AgentSpec{{4.0, 12.0}, {-0.7, -0.2}},
        AgentSpec{{0.0, 8.0}, {0.5, 0.4}},
    };
    spec.jumps = {JumpEvent{2, 50, 69, 25.0}};
    return spec;
  }
  throw InvalidSpec("unknown scene '" + name + "'");
}

std::vector<std::string> scene_names() {
  std::vector<std::string> names;
  for (const SceneSpec& spec : benchmark_scenes()) {
    names.push_back(spec.name);
  }
  names.push_back("pan");
  names.push_back("static");
  names.push_back("jump");
  return names;
}

std::vector<TrackRow> track_scene(const SyntheticScene& scene,
                                  TrackerConfig cfg) {
  cfg.dt = 1.0 / scene.fps;
  const std::vector<FrameResult> results =
      run_sequence(scene.detections, scene.h0, scene.affines, cfg);
  std::vector<TrackRow> rows;
  for (const FrameResult& fr : results) {
    for (const OutputRow& row : fr.rows) {
      rows.push_back(TrackRow{fr.frame, row.id, row.box, row.conf});
    }
  }
  return rows;
}

}  // namespace jhtrack
