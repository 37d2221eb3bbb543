#pragma once

// Boxes, planar transforms and the overlap measures used by evaluation.
//
// Coordinates are continuous with the origin at the top-left corner and y
// growing downward. Pixel (row i, column j) covers [j, j+1) x [i, i+1), so an
// integer-aligned box covers exactly the pixels it names.

#include <array>
#include <span>
#include <vector>

namespace scanfig {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

class BoundingBox {
 public:
  constexpr BoundingBox() = default;
  // Throws ParameterError unless x1 <= x2, y1 <= y2 and all values finite.
  BoundingBox(double x1, double y1, double x2, double y2);

  static BoundingBox from_xywh(double x, double y, double width, double height);
  // Smallest box containing every point; `points` must be non-empty.
  static BoundingBox envelope(std::span<const Point2> points);

  double x1() const noexcept { return x1_; }
  double y1() const noexcept { return y1_; }
  double x2() const noexcept { return x2_; }
  double y2() const noexcept { return y2_; }
  double width() const noexcept { return x2_ - x1_; }
  double height() const noexcept { return y2_ - y1_; }
  double area() const noexcept { return width() * height(); }
  Point2 center() const noexcept { return {(x1_ + x2_) / 2.0, (y1_ + y2_) / 2.0}; }
  std::array<Point2, 4> corners() const noexcept {
    return {{{x1_, y1_}, {x2_, y1_}, {x2_, y2_}, {x1_, y2_}}};
  }

  bool contains(Point2 p) const noexcept {
    return p.x >= x1_ && p.x <= x2_ && p.y >= y1_ && p.y <= y2_;
  }

  // Intersection with [0,width] x [0,height]; may become degenerate.
  BoundingBox clipped(double width, double height) const noexcept;
  BoundingBox united(const BoundingBox& other) const noexcept;
  // Moves every edge inward by `amount`; collapses to the center line
  // rather than inverting.
  BoundingBox inset(double amount) const noexcept;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double x1_ = 0.0, y1_ = 0.0, x2_ = 0.0, y2_ = 0.0;
};

double intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept;

// |a ∩ b| / |a ∪ b|, and 0 when the union is empty.
double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

double center_distance(const BoundingBox& a, const BoundingBox& b) noexcept;

// Row-major 2x3 matrix [a b c; d e f] acting as (x,y) -> (ax+by+c, dx+ey+f).
class Affine2 {
 public:
  constexpr Affine2() = default;
  explicit Affine2(const std::array<double, 6>& m);

  static Affine2 identity() { return {}; }
  static Affine2 translation(double dx, double dy);
  // Rotation by `degrees` about `center`. Positive angles turn the page
  // counter-clockwise as displayed: (x,y) -> (y, H-x) for 90 degrees about
  // the center of an H x H page.
  static Affine2 rotation(Point2 center, double degrees);

  Point2 apply(Point2 p) const noexcept;
  // Throws DegenerateWarpError for a singular matrix.
  Affine2 inverse() const;
  // (*this)(other(p))
  Affine2 compose(const Affine2& other) const noexcept;

  const std::array<double, 6>& matrix() const noexcept { return m_; }
  bool is_identity() const noexcept;

 private:
  std::array<double, 6> m_{1, 0, 0, 0, 1, 0};
};

// Row-major 3x3 homography, normalized so that m[8] == 1.
class Projective2 {
 public:
  Projective2() = default;
  // Throws DegenerateWarpError if |det| <= 1e-12 or m[8] == 0.
  explicit Projective2(const std::array<double, 9>& m);

  static Projective2 identity() { return {}; }
  // Homography taking src[i] to dst[i] for four point pairs.
  // Throws DegenerateWarpError when the correspondence is singular.
  static Projective2 from_quad(const std::array<Point2, 4>& src,
                               const std::array<Point2, 4>& dst);

  // Throws DegenerateWarpError when p maps to the line at infinity.
  Point2 apply(Point2 p) const;
  // Homogeneous w for p; apply() divides by this.
  double weight(Point2 p) const noexcept;
  Projective2 inverse() const;

  const std::array<double, 9>& matrix() const noexcept { return m_; }
  bool is_identity() const noexcept;

 private:
  std::array<double, 9> m_{1, 0, 0, 0, 1, 0, 0, 0, 1};
};

// Axis-aligned envelope of the four mapped corners of `b`.
BoundingBox transform_box(const Affine2& t, const BoundingBox& b) noexcept;
// Throws DegenerateWarpError if the box straddles or touches the horizon.
BoundingBox transform_box(const Projective2& t, const BoundingBox& b);

// True when the quadrilateral (in order) is strictly convex.
bool is_convex_quad(const std::array<Point2, 4>& q) noexcept;

}  // namespace scanfig
