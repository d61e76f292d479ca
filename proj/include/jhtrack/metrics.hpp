#pragma once

#include <vector>

#include "jhtrack/io.hpp"

namespace jhtrack {

struct MotaResult {
  double mota = 1.0;
  long tp = 0;
  long fn = 0;
  long fp = 0;
  long idsw = 0;
  long gt_total = 0;
};

// CLEAR-style MOTA: per-frame IoU-gated matching that maximizes the match
// count (total IoU as tie-break); an id switch is counted when a ground
// truth changes its matched hypothesis id relative to its last match.
MotaResult mota(const std::vector<TrackRow>& gt,
                const std::vector<TrackRow>& res, double iou_gate = 0.5);

struct Idf1Result {
  double idf1 = 1.0;
  long idtp = 0;
  long idfp = 0;
  long idfn = 0;
};

// IDF1 under the optimal global one-to-one id correspondence (maximum total
// per-frame overlap count).
Idf1Result idf1(const std::vector<TrackRow>& gt,
                const std::vector<TrackRow>& res, double iou_gate = 0.5);

}  // namespace jhtrack
