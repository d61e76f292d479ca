#pragma once

#include <cstddef>
#include <deque>

#include "jhtrack/geometry.hpp"

namespace jhtrack {

// Sliding buffer of the most recent associated boxes of a track.
class BoxBuffer {
 public:
  BoxBuffer() = default;
  explicit BoxBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(const BBox& box);
  // Drops the history and restarts the buffer from a single box.
  void clear_and_seed(const BBox& box);

  bool empty() const { return boxes_.empty(); }
  std::size_t size() const { return boxes_.size(); }
  const BBox& back() const;

  // Linear extrapolation: the last box plus the mean of consecutive
  // differences across the buffer. With a single stored box, that box.
  // Throws EmptyBuffer when no box is stored.
  BBox predict() const;

 private:
  std::size_t capacity_ = 5;
  std::deque<BBox> boxes_;
};

// Box placed so that its bottom-centre coincides with the projected ground
// position, with the given width/height.
BBox coast_box(const ImagePoint& ground_proj, double w, double h);

// Buffered IoU: each box is scaled about its centre by (2 * buffer + 1)
// before computing the intersection-over-union. Degenerate unions give 0.
double biou(const BBox& a, const BBox& b, double buffer);

}  // namespace jhtrack
