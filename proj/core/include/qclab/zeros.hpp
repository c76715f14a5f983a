#pragma once

// Real zeros of exponential sums, certified by the argument principle.

#include <cstddef>
#include <optional>
#include <vector>

#include "qclab/wiener.hpp"

namespace qclab {

struct Window {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  double center() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

struct Zero {
  double point = 0.0;
  int multiplicity = 1;

  friend bool operator==(const Zero&, const Zero&) = default;
};

// Sorted real multiset over a window. Points are strictly increasing and lie
// inside the window; multiplicities are positive.
class ZeroSet {
 public:
  ZeroSet() = default;
  // Sorts, merges exactly equal points and validates the invariants.
  ZeroSet(Window window, std::vector<Zero> points);

  const Window& window() const noexcept { return window_; }
  const std::vector<Zero>& points() const noexcept { return points_; }
  bool empty() const noexcept { return points_.empty(); }
  std::size_t distinct() const noexcept { return points_.size(); }
  long total_multiplicity() const noexcept;

  // Every point repeated according to its multiplicity.
  std::vector<double> expanded() const;

  // Number of points (with multiplicity) in [a, b) or [a, b].
  long count_half_open(double a, double b) const;
  long count_closed(double a, double b) const;

  ZeroSet translated(double delta) const;

  friend bool operator==(const ZeroSet& a, const ZeroSet& b) {
    return a.window_.lo == b.window_.lo && a.window_.hi == b.window_.hi &&
           a.points_ == b.points_;
  }

 private:
  Window window_{};
  std::vector<Zero> points_;
  std::vector<long> cumulative_;  // cumulative_[k] = sum of mult over points[0..k)
};

struct Rect {
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;
};

struct ZeroOptions {
  double resid_tol = 1e-8;      // |f(a)| < resid_tol * ||f||_W accepts a zero
  double boundary_tol = 1e-6;   // zeros this close to a window end are rejected
  double edge_margin = 1e-6;    // contour must keep |f| above edge_margin * ||f||_W
  int newton_iterations = 60;
  double newton_tol = 1e-12;
  int refine_depth = 4;         // rescans of blocks whose contour count disagrees
  std::optional<double> scan_step;  // default 1 / (16 max|omega|) after centering
  AlgebraOptions algebra{};
};

struct ZeroSearch {
  ZeroSet zeros;
  bool single_exponential = false;  // f has fewer than two terms: no zeros at all
  double scan_step = 0.0;
  double strip_height = 0.0;        // half-height of the completeness strip
  long strip_count = 0;             // zeros inside window x [-h, h] by contour
  double max_residual = 0.0;        // max |f(a)| / ||f||_W over returned points
};

// Winding number of f along the boundary of `rect`, i.e. the number of zeros
// inside counted with multiplicity. Each sampling step is bounded by
// |f(z)| / sup|f'| over the rectangle, which keeps every sub-arc of the image
// curve inside a disc that excludes the origin.
long count_zeros_rectangle(const ExpSum& f, const Rect& rect, const ZeroOptions& opts = {});

ZeroSearch search_real_zeros(const ExpSum& f, Window window, const ZeroOptions& opts = {});

ZeroSet find_real_zeros(const ExpSum& f, Window window, const ZeroOptions& opts = {});

struct RealnessReport {
  long real_count = 0;
  long total_count = 0;
  bool all_real = true;
};

RealnessReport realness_check(const ExpSum& f, Window window, double strip_height,
                              const ZeroOptions& opts = {});

// Height h such that every zero of f satisfies |Im z| < h, from the
// dominant-term bound applied to f and to its reflection.
double zero_strip_height(const ExpSum& f);

// Moves each end of the window by at most a few scan steps to where |f| is
// locally largest, so that contours through the ends keep a margin.
Window safe_window(const ExpSum& f, Window window);

}  // namespace qclab
