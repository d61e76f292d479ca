#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jhtrack/io.hpp"

namespace jhtrack {

// Deterministic, implementation-independent generator: a splitmix64 stream
// is derived per (seed, agent, frame), so the draw order of other agents or
// frames never shifts the samples.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // Uniform double in [0, 1) from the top 53 bits.
  double uniform();
  // Standard normal pair via the Box-Muller transform.
  void gaussian_pair(double& n1, double& n2);

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
};

// Constant-velocity agent on the ground plane with a fixed physical box
// size; positions are metres, velocities metres per second.
struct AgentSpec {
  GroundPoint start = GroundPoint::Zero();  // position at frame 1
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  double width_m = 0.6;
  double height_m = 1.8;
  long first_frame = 1;
  long last_frame = -1;  // -1: visible until the end of the scene
};

// Vertical box displacement with the ground position held (agent leaves the
// plane).
struct JumpEvent {
  int agent = 0;
  long first_frame = 0;
  long last_frame = 0;
  double offset_px = 0.0;
};

// Full occlusion suppresses detections and ground truth; a penalty below 1
// keeps the detection with reduced confidence instead.
struct OcclusionEvent {
  int agent = 0;
  long first_frame = 0;
  long last_frame = 0;
  double penalty = 1.0;
};

enum class CameraScript { kStatic, kPan };

struct SceneSpec {
  std::string name = "scene";
  long frames = 300;
  double fps = 20.0;
  std::vector<AgentSpec> agents;
  CameraScript camera = CameraScript::kStatic;
  double pan_px = 2.0;  // per-frame horizontal image translation when panning
  double noise_px = 1.0;
  double dropout = 0.0;
  double base_conf = 0.95;
  double conf_jitter = 0.04;
  std::vector<JumpEvent> jumps;
  std::vector<OcclusionEvent> occlusions;
  std::uint64_t seed = 1;
  // Base homography: image scales in pixels per metre, principal offsets
  // and a small perspective coefficient on the ground y axis.
  double scale_x = 50.0;
  double scale_y = 25.0;
  double offset_x = 640.0;
  double offset_y = 120.0;
  double perspective = 0.002;
};

struct SyntheticScene {
  std::vector<TrackRow> gt;  // ids are agent indices plus one
  std::map<long, std::vector<Detection>> detections;
  Homography h0;
  std::map<long, AffineMotion> affines;
  double fps = 20.0;
};

// Builds the scene: scripted camera homography H_f = A_f * H_{f-1}, true
// boxes of fixed physical size projected through it, Gaussian pixel noise
// and dropout on detections. Throws InvalidSpec on malformed specs.
SyntheticScene generate(const SceneSpec& spec);

// Fixed benchmark suite used by the tune subcommand.
std::vector<SceneSpec> benchmark_scenes();

// Named scene registry for the synth subcommand; throws InvalidSpec for an
// unknown name.
SceneSpec named_scene(const std::string& name);
std::vector<std::string> scene_names();

// Runs the tracker over a generated scene (dt taken from the scene frame
// rate) and returns its output rows.
std::vector<TrackRow> track_scene(const SyntheticScene& scene,
                                  TrackerConfig cfg);

}  // namespace jhtrack
