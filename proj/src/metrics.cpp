#include "jhtrack/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "jhtrack/association.hpp"
#include "jhtrack/image_filter.hpp"

namespace jhtrack {

namespace {

double iou(const BBox& a, const BBox& b) { return biou(a, b, 0.0); }

using FrameMap = std::map<long, std::vector<TrackRow>>;

FrameMap by_frame(const std::vector<TrackRow>& rows) {
  FrameMap out;
  for (const TrackRow& r : rows) {
    out[r.frame].push_back(r);
  }
  return out;
}

// Match-count prioritized matching over IoU-gated pairs. The constant
// offset dominates any total-IoU difference, so the solver maximizes the
// number of matches first and total IoU second.
std::vector<std::pair<int, int>> frame_matching(
    const std::vector<TrackRow>& gt, const std::vector<TrackRow>& res,
    double gate) {
  Eigen::MatrixXd w(gt.size(), res.size());
  std::vector<std::vector<bool>> allowed(gt.size(),
                                         std::vector<bool>(res.size(), false));
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (std::size_t j = 0; j < res.size(); ++j) {
      const double o = iou(gt[i].box, res[j].box);
      allowed[i][j] = o >= gate;
      w(i, j) = allowed[i][j] ? 1000.0 + o : 0.0;
    }
  }
  return detail::max_weight_matching(w, allowed);
}

}  // namespace

MotaResult mota(const std::vector<TrackRow>& gt,
                const std::vector<TrackRow>& res, double iou_gate) {
  const FrameMap gtf = by_frame(gt);
  const FrameMap resf = by_frame(res);
  std::set<long> frames;
  for (const auto& [f, _] : gtf) frames.insert(f);
  for (const auto& [f, _] : resf) frames.insert(f);

  MotaResult out;
  out.gt_total = static_cast<long>(gt.size());
  std::map<int, int> last_match;  // gt id -> last matched result id
  static const std::vector<TrackRow> kEmpty;

  for (long f : frames) {
    const auto git = gtf.find(f);
    const auto rit = resf.find(f);
    const std::vector<TrackRow>& g = git == gtf.end() ? kEmpty : git->second;
    const std::vector<TrackRow>& r = rit == resf.end() ? kEmpty : rit->second;
    const auto matches = frame_matching(g, r, iou_gate);
    out.tp += static_cast<long>(matches.size());
    out.fn += static_cast<long>(g.size() - matches.size());
    out.fp += static_cast<long>(r.size() - matches.size());
    for (const auto& [gi, ri] : matches) {
      const int gt_id = g[gi].id;
      const int res_id = r[ri].id;
      const auto it = last_match.find(gt_id);
      if (it != last_match.end() && it->second != res_id) {
        out.idsw += 1;
      }
      last_match[gt_id] = res_id;
    }
  }
  const double denom = static_cast<double>(std::max<long>(out.gt_total, 1));
  out.mota = 1.0 - static_cast<double>(out.fn + out.fp + out.idsw) / denom;
  return out;
}

Idf1Result idf1(const std::vector<TrackRow>& gt,
                const std::vector<TrackRow>& res, double iou_gate) {
  // Per-frame binary overlap counts per (gt id, result id).
  const FrameMap gtf = by_frame(gt);
  const FrameMap resf = by_frame(res);
  std::map<int, int> gt_ids, res_ids;
  for (const TrackRow& r : gt) gt_ids.emplace(r.id, 0);
  for (const TrackRow& r : res) res_ids.emplace(r.id, 0);
  int next = 0;
  for (auto& [id, idx] : gt_ids) idx = next++;
  next = 0;
  for (auto& [id, idx] : res_ids) idx = next++;

  Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(
      static_cast<long>(gt_ids.size()), static_cast<long>(res_ids.size()));
  for (const auto& [f, g] : gtf) {
    const auto rit = resf.find(f);
    if (rit == resf.end()) continue;
    for (const TrackRow& grow : g) {
      for (const TrackRow& rrow : rit->second) {
        if (iou(grow.box, rrow.box) >= iou_gate) {
          overlap(gt_ids[grow.id], res_ids[rrow.id]) += 1.0;
        }
      }
    }
  }

  std::vector<std::vector<bool>> allowed(
      gt_ids.size(), std::vector<bool>(res_ids.size(), true));
  double idtp = 0.0;
  if (overlap.size() > 0) {
    idtp = detail::max_weight_value(overlap, allowed);
  }

  Idf1Result out;
  out.idtp = static_cast<long>(idtp + 0.5);
  out.idfn = static_cast<long>(gt.size()) - out.idtp;
  out.idfp = static_cast<long>(res.size()) - out.idtp;
  const double denom = static_cast<double>(gt.size() + res.size());
  out.idf1 = denom > 0.0 ? 2.0 * out.idtp / denom : 1.0;
  return out;
}

}  // namespace jhtrack
