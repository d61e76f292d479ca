#include "jhtrack/image_filter.hpp"

#include <algorithm>

namespace jhtrack {

void BoxBuffer::push(const BBox& box) {
  if (capacity_ > 0 && boxes_.size() == capacity_) {
    boxes_.pop_front();
  }
  boxes_.push_back(box);
}

void BoxBuffer::clear_and_seed(const BBox& box) {
  boxes_.clear();
  boxes_.push_back(box);
}

const BBox& BoxBuffer::back() const {
  if (boxes_.empty()) {
    throw EmptyBuffer("box buffer holds no boxes");
  }
  return boxes_.back();
}

BBox BoxBuffer::predict() const {
  if (boxes_.empty()) {
    throw EmptyBuffer("box buffer holds no boxes");
  }
  const BBox& last = boxes_.back();
  if (boxes_.size() < 2) {
    return last;
  }
  // Mean of consecutive differences equals (last - first) / (count - 1).
  const BBox& first = boxes_.front();
  const double denom = static_cast<double>(boxes_.size() - 1);
  return BBox{last.l + (last.l - first.l) / denom,
              last.t + (last.t - first.t) / denom,
              last.r + (last.r - first.r) / denom,
              last.b + (last.b - first.b) / denom};
}

BBox coast_box(const ImagePoint& ground_proj, double w, double h) {
  return BBox{ground_proj.x() - 0.5 * w, ground_proj.y() - h,
              ground_proj.x() + 0.5 * w, ground_proj.y()};
}

namespace {

BBox expand(const BBox& box, double factor) {
  const double cx = 0.5 * (box.l + box.r);
  const double cy = 0.5 * (box.t + box.b);
  const double hw = 0.5 * box.width() * factor;
  const double hh = 0.5 * box.height() * factor;
  return BBox{cx - hw, cy - hh, cx + hw, cy + hh};
}

}  // namespace

double biou(const BBox& a, const BBox& b, double buffer) {
  const double factor = 2.0 * buffer + 1.0;
  const BBox ea = expand(a, factor);
  const BBox eb = expand(b, factor);
  const double iw = std::min(ea.r, eb.r) - std::max(ea.l, eb.l);
  const double ih = std::min(ea.b, eb.b) - std::max(ea.t, eb.t);
  const double inter = std::max(iw, 0.0) * std::max(ih, 0.0);
  const double uni = ea.area() + eb.area() - inter;
  if (uni <= 0.0) {
    return 0.0;
  }
  return inter / uni;
}

}  // namespace jhtrack
