#pragma once

#include <map>
#include <string>
#include <vector>

#include "jhtrack/config.hpp"
#include "jhtrack/tracker.hpp"

namespace jhtrack {

// One id-carrying track row, used both for ground truth and result files.
struct TrackRow {
  long frame = 0;
  int id = 0;
  BBox box;
  double conf = 1.0;
};

// Everything needed to run one sequence.
struct SequenceBundle {
  std::string name;
  std::map<long, std::vector<Detection>> detections;
  Homography h0;
  std::map<long, AffineMotion> affines;
  double fps = 20.0;
};

// Detection CSV: frame,id,left,top,width,height,conf[,x,y,z]. The id column
// is ignored; a missing conf column defaults to 1. Negative sizes are
// clamped to zero with a warning. Throws ParseError with the line number on
// malformed rows, IoError when the file cannot be read.
std::map<long, std::vector<Detection>> read_detections(const std::string& path);

// Same column layout, id preserved (ground truth / result files).
std::vector<TrackRow> read_track_rows(const std::string& path);

// Nine whitespace-separated reals, row-major, normalized so h9 = 1.
Homography read_homography(const std::string& path);
void write_homography(const std::string& path, const Homography& h);

// Rows "frame a11 a12 a13 a21 a22 a23"; frames absent from the file are
// treated as identity by the caller. A duplicated frame keeps the last row
// and warns.
std::map<long, AffineMotion> read_affines(const std::string& path);
void write_affines(const std::string& path,
                   const std::map<long, AffineMotion>& affines);

// Flat "key = value" config files with '#' comments. Unknown keys are
// rejected.
TrackerConfig read_config(const std::string& path);
void write_config(const std::string& path, const TrackerConfig& cfg);

// Result rows "frame,id,left,top,width,height,conf,-1,-1,-1", geometry with
// two decimals, confidence with four; frames ascending, ids ascending
// within a frame.
void write_results(const std::string& path,
                   const std::vector<FrameResult>& results);

// Ground-truth rows "frame,id,left,top,width,height,1,-1,-1,-1".
void write_track_rows(const std::string& path,
                      const std::vector<TrackRow>& rows, bool gt_flag_column);

}  // namespace jhtrack
