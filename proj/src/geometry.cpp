#include "scanfig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "scanfig/error.hpp"

namespace scanfig {

namespace {

constexpr double kSingularEps = 1e-12;

bool all_finite(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

BoundingBox::BoundingBox(double x1, double y1, double x2, double y2)
    : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!all_finite({x1, y1, x2, y2})) {
    throw ParameterError("bounding box has non-finite coordinate");
  }
  if (x1 > x2 || y1 > y2) {
    throw ParameterError("bounding box corners out of order: (" + std::to_string(x1) + "," +
                         std::to_string(y1) + "," + std::to_string(x2) + "," +
                         std::to_string(y2) + ")");
  }
}

BoundingBox BoundingBox::from_xywh(double x, double y, double width, double height) {
  return BoundingBox(x, y, x + width, y + height);
}

BoundingBox BoundingBox::envelope(std::span<const Point2> points) {
  if (points.empty()) throw ParameterError("envelope of an empty point set");
  double x1 = points[0].x, x2 = points[0].x, y1 = points[0].y, y2 = points[0].y;
  for (const Point2& p : points.subspan(1)) {
    x1 = std::min(x1, p.x);
    x2 = std::max(x2, p.x);
    y1 = std::min(y1, p.y);
    y2 = std::max(y2, p.y);
  }
  return BoundingBox(x1, y1, x2, y2);
}

BoundingBox BoundingBox::clipped(double width, double height) const noexcept {
  BoundingBox out;
  out.x1_ = std::clamp(x1_, 0.0, width);
  out.x2_ = std::clamp(x2_, 0.0, width);
  out.y1_ = std::clamp(y1_, 0.0, height);
  out.y2_ = std::clamp(y2_, 0.0, height);
  return out;
}

BoundingBox BoundingBox::united(const BoundingBox& other) const noexcept {
  BoundingBox out;
  out.x1_ = std::min(x1_, other.x1_);
  out.y1_ = std::min(y1_, other.y1_);
  out.x2_ = std::max(x2_, other.x2_);
  out.y2_ = std::max(y2_, other.y2_);
  return out;
}

BoundingBox BoundingBox::inset(double amount) const noexcept {
  BoundingBox out = *this;
  const double dx = std::min(amount, width() / 2.0);
  const double dy = std::min(amount, height() / 2.0);
  out.x1_ += dx;
  out.x2_ -= dx;
  out.y1_ += dy;
  out.y2_ -= dy;
  return out;
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double w = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  const double h = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double center_distance(const BoundingBox& a, const BoundingBox& b) noexcept {
  const Point2 ca = a.center(), cb = b.center();
  return std::hypot(ca.x - cb.x, ca.y - cb.y);
}

// ---- Affine2 ---------------------------------------------------------------

Affine2::Affine2(const std::array<double, 6>& m) : m_(m) {
  for (double v : m_) {
    if (!std::isfinite(v)) throw ParameterError("affine transform has non-finite entry");
  }
}

Affine2 Affine2::translation(double dx, double dy) { return Affine2({1, 0, dx, 0, 1, dy}); }

Affine2 Affine2::rotation(Point2 center, double degrees) {
  const double rad = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);
  // x' = c(x-cx) + s(y-cy) + cx ; y' = -s(x-cx) + c(y-cy) + cy
  return Affine2({c, s, center.x - c * center.x - s * center.y,  //
                  -s, c, center.y + s * center.x - c * center.y});
}

Point2 Affine2::apply(Point2 p) const noexcept {
  return {m_[0] * p.x + m_[1] * p.y + m_[2], m_[3] * p.x + m_[4] * p.y + m_[5]};
}

Affine2 Affine2::inverse() const {
  const double det = m_[0] * m_[4] - m_[1] * m_[3];
  if (std::abs(det) <= kSingularEps) throw DegenerateWarpError("singular affine transform");
  const double a = m_[4] / det, b = -m_[1] / det, d = -m_[3] / det, e = m_[0] / det;
  return Affine2({a, b, -(a * m_[2] + b * m_[5]), d, e, -(d * m_[2] + e * m_[5])});
}

Affine2 Affine2::compose(const Affine2& o) const noexcept {
  const auto& a = m_;
  const auto& b = o.m_;
  Affine2 out;
  out.m_ = {a[0] * b[0] + a[1] * b[3], a[0] * b[1] + a[1] * b[4], a[0] * b[2] + a[1] * b[5] + a[2],
            a[3] * b[0] + a[4] * b[3], a[3] * b[1] + a[4] * b[4], a[3] * b[2] + a[4] * b[5] + a[5]};
  return out;
}

bool Affine2::is_identity() const noexcept { return m_ == Affine2().m_; }

// ---- Projective2 -----------------------------------------------------------

namespace {

double det3(const std::array<double, 9>& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

}  // namespace

Projective2::Projective2(const std::array<double, 9>& m) {
  for (double v : m) {
    if (!std::isfinite(v)) throw DegenerateWarpError("homography has non-finite entry");
  }
  if (m[8] == 0.0) throw DegenerateWarpError("homography has zero scale entry");
  for (std::size_t i = 0; i < 9; ++i) m_[i] = m[i] / m[8];
  if (std::abs(det3(m_)) <= kSingularEps) throw DegenerateWarpError("singular homography");
}

Projective2 Projective2::from_quad(const std::array<Point2, 4>& src,
                                   const std::array<Point2, 4>& dst) {
  // Unknowns h0..h7 with h8 = 1:
  //   u = (h0 x + h1 y + h2) / (h6 x + h7 y + 1)
  //   v = (h3 x + h4 y + h5) / (h6 x + h7 y + 1)
  double a[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    const double x = src[i].x, y = src[i].y, u = dst[i].x, v = dst[i].y;
    double* r0 = a[2 * i];
    double* r1 = a[2 * i + 1];
    r0[0] = x, r0[1] = y, r0[2] = 1, r0[6] = -u * x, r0[7] = -u * y, r0[8] = u;
    r1[3] = x, r1[4] = y, r1[5] = 1, r1[6] = -v * x, r1[7] = -v * y, r1[8] = v;
  }
  // Gaussian elimination with partial pivoting on the augmented system.
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) <= kSingularEps) {
      throw DegenerateWarpError("point correspondence does not determine a homography");
    }
    if (pivot != col) std::swap(a[pivot], a[col]);
    for (int r = 0; r < 8; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::array<double, 9> h{};
  for (int i = 0; i < 8; ++i) h[i] = a[i][8] / a[i][i];
  h[8] = 1.0;
  return Projective2(h);
}

double Projective2::weight(Point2 p) const noexcept { return m_[6] * p.x + m_[7] * p.y + m_[8]; }

Point2 Projective2::apply(Point2 p) const {
  const double w = weight(p);
  if (std::abs(w) <= kSingularEps) throw DegenerateWarpError("point maps to infinity");
  return {(m_[0] * p.x + m_[1] * p.y + m_[2]) / w, (m_[3] * p.x + m_[4] * p.y + m_[5]) / w};
}

Projective2 Projective2::inverse() const {
  const auto& m = m_;
  const double det = det3(m);
  if (std::abs(det) <= kSingularEps) throw DegenerateWarpError("singular homography");
  std::array<double, 9> adj = {
      m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
      m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
      m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]};
  for (double& v : adj) v /= det;
  return Projective2(adj);
}

bool Projective2::is_identity() const noexcept { return m_ == Projective2().m_; }

// ---- box mapping -----------------------------------------------------------

BoundingBox transform_box(const Affine2& t, const BoundingBox& b) noexcept {
  std::array<Point2, 4> pts = b.corners();
  for (Point2& p : pts) p = t.apply(p);
  return BoundingBox::envelope(pts);
}

BoundingBox transform_box(const Projective2& t, const BoundingBox& b) {
  std::array<Point2, 4> pts = b.corners();
  const double w0 = t.weight(pts[0]);
  for (Point2& p : pts) {
    // A sign change in w means the box crosses the horizon; its image is
    // unbounded and the envelope of corners would be meaningless.
    if (t.weight(p) * w0 <= 0.0) throw DegenerateWarpError("box crosses the line at infinity");
    p = t.apply(p);
  }
  return BoundingBox::envelope(pts);
}

bool is_convex_quad(const std::array<Point2, 4>& q) noexcept {
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const Point2& a = q[i];
    const Point2& b = q[(i + 1) % 4];
    const Point2& c = q[(i + 2) % 4];
    const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (!std::isfinite(cross) || cross == 0.0) return false;
    const int s = cross > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

}  // namespace scanfig
