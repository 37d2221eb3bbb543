#include "scanfig/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scanfig/error.hpp"
#include "scanfig/kernels.hpp"

namespace scanfig {

PageImage::PageImage(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0) throw ParameterError("image dimensions must be positive");
  if (channels != 1 && channels != 3) throw ParameterError("image must have 1 or 3 channels");
  pixels_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

PageImage::PageImage(int width, int height, int channels, std::vector<std::uint8_t> pixels)
    : PageImage(width, height, channels) {
  if (pixels.size() != pixels_.size()) {
    throw ParameterError("pixel buffer has " + std::to_string(pixels.size()) +
                         " bytes, expected " + std::to_string(pixels_.size()));
  }
  pixels_ = std::move(pixels);
}

void PageImage::fill_rect(const BoundingBox& box, std::uint8_t value) {
  const BoundingBox b = box.clipped(width_, height_);
  const int x0 = static_cast<int>(std::ceil(b.x1() - 0.5));
  const int x1 = static_cast<int>(std::ceil(b.x2() - 0.5));
  const int y0 = static_cast<int>(std::ceil(b.y1() - 0.5));
  const int y1 = static_cast<int>(std::ceil(b.y2() - 0.5));
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      for (int c = 0; c < channels_; ++c) at(x, y, c) = value;
    }
  }
}

namespace {

// Bilinear sample at continuous position (sx, sy); pixel centers sit at
// half-integers. Samples outside the frame read as background.
template <typename Inverse>
PageImage resample(const PageImage& img, const Inverse& inverse) {
  PageImage out(img.width(), img.height(), img.channels());
  const int w = img.width(), h = img.height(), ch = img.channels();
  auto fetch = [&](int x, int y, int c) -> double {
    if (x < 0 || y < 0 || x >= w || y >= h) return kBackground;
    return img.at(x, y, c);
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Point2 src = inverse(Point2{x + 0.5, y + 0.5});
      const double u = src.x - 0.5, v = src.y - 0.5;
      if (!std::isfinite(u) || !std::isfinite(v) || u < -2.0 || v < -2.0 || u > w + 1.0 ||
          v > h + 1.0) {
        continue;  // already background
      }
      const int x0 = static_cast<int>(std::floor(u));
      const int y0 = static_cast<int>(std::floor(v));
      const double fx = u - x0, fy = v - y0;
      for (int c = 0; c < ch; ++c) {
        const double top = (1.0 - fx) * fetch(x0, y0, c) + fx * fetch(x0 + 1, y0, c);
        const double bottom = (1.0 - fx) * fetch(x0, y0 + 1, c) + fx * fetch(x0 + 1, y0 + 1, c);
        const double value = (1.0 - fy) * top + fy * bottom;
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::nearbyint(value), 0.0, 255.0));
      }
    }
  }
  return out;
}

}  // namespace

PageImage warp(const PageImage& img, const Affine2& t) {
  if (t.is_identity()) return img;
  const Affine2 inv = t.inverse();
  return resample(img, [&](Point2 p) { return inv.apply(p); });
}

PageImage warp(const PageImage& img, const Projective2& t) {
  if (t.is_identity()) return img;
  const Projective2 inv = t.inverse();
  return resample(img, [&](Point2 p) {
    const double w = inv.weight(p);
    // Points behind the camera have no preimage on the page.
    if (w <= 1e-12) return Point2{-1e9, -1e9};
    return inv.apply(p);
  });
}

WarpResult<Affine2> rotate_affine(const PageImage& img, double degrees) {
  if (!std::isfinite(degrees)) throw ParameterError("rotation angle must be finite");
  if (degrees == 0.0) return {img, Affine2::identity()};
  const Affine2 t = Affine2::rotation({img.width() / 2.0, img.height() / 2.0}, degrees);
  return {warp(img, t), t};
}

PageImage additive_gaussian_noise(const PageImage& img, double mean, double stddev,
                                  RandomSeed seed) {
  if (!std::isfinite(mean) || !std::isfinite(stddev) || stddev < 0.0) {
    throw ParameterError("gaussian noise needs finite mean and stddev >= 0");
  }
  const CounterRng rng(seed);
  const auto src = img.pixels();
  std::vector<float> delta(src.size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    delta[i] = static_cast<float>(stddev == 0.0 ? mean : mean + stddev * rng.normal(i));
  }
  PageImage out(img.width(), img.height(), img.channels());
  kernels::add_clamp(src, delta, out.pixels());
  return out;
}

PageImage salt_and_pepper(const PageImage& img, double p, RandomSeed seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("salt-and-pepper probability outside [0,1]");
  PageImage out = img;
  if (p == 0.0) return out;
  const CounterRng rng(seed);
  const std::size_t n = img.pixel_count();
  const auto ch = static_cast<std::size_t>(img.channels());
  auto px = out.pixels();
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform01(2 * i) >= p) continue;
    const std::uint8_t v = (rng.at(2 * i + 1) & 1U) ? 255 : 0;
    std::fill_n(px.begin() + static_cast<std::ptrdiff_t>(i * ch), ch, v);
  }
  return out;
}

std::vector<float> gaussian_kernel(double sigma) {
  if (!std::isfinite(sigma) || sigma < 0.0) throw ParameterError("blur sigma must be >= 0");
  if (sigma == 0.0) return {1.0f};
  const auto radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-(k * k) / (2.0 * sigma * sigma));
    w[static_cast<std::size_t>(k + radius)] = v;
    sum += v;
  }
  std::vector<float> taps(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) taps[i] = static_cast<float>(w[i] / sum);
  return taps;
}

PageImage gaussian_blur(const PageImage& img, double sigma) {
  const std::vector<float> taps = gaussian_kernel(sigma);
  if (taps.size() == 1) return img;
  const std::size_t n = img.pixel_count();
  const auto ch = static_cast<std::size_t>(img.channels());
  const auto width = static_cast<std::size_t>(img.width());
  std::vector<std::uint8_t> plane(n);
  std::vector<float> a(n), b(n);
  PageImage out(img.width(), img.height(), img.channels());
  const auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t c = 0; c < ch; ++c) {
    for (std::size_t i = 0; i < n; ++i) plane[i] = src[i * ch + c];
    kernels::u8_to_f32(plane, a);
    kernels::convolve_rows(a, b, width, taps);
    kernels::convolve_cols(b, a, width, taps);
    kernels::f32_to_u8(a, plane);
    for (std::size_t i = 0; i < n; ++i) dst[i * ch + c] = plane[i];
  }
  return out;
}

PageImage linear_contrast(const PageImage& img, double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0) throw ParameterError("contrast alpha must be >= 0");
  PageImage out(img.width(), img.height(), img.channels());
  kernels::linear_contrast(img.pixels(), out.pixels(), static_cast<float>(alpha));
  return out;
}

std::array<Point2, 4> page_corners(int width, int height) noexcept {
  const double w = width, h = height;
  return {{{0, 0}, {w, 0}, {w, h}, {0, h}}};
}

std::array<Point2, 4> random_perspective_corners(int width, int height, double jitter,
                                                 RandomSeed seed) {
  if (!(jitter >= 0.0 && jitter < 0.5)) {
    throw ParameterError("perspective jitter fraction must be in [0, 0.5)");
  }
  std::array<Point2, 4> q = page_corners(width, height);
  if (jitter == 0.0) return q;
  const CounterRng rng(seed);
  const double sx[4] = {1, -1, -1, 1};
  const double sy[4] = {1, 1, -1, -1};
  for (std::size_t i = 0; i < 4; ++i) {
    q[i].x += sx[i] * rng.uniform01(2 * i) * jitter * width;
    q[i].y += sy[i] * rng.uniform01(2 * i + 1) * jitter * height;
  }
  return q;
}

WarpResult<Projective2> perspective_warp(const PageImage& img, const std::array<Point2, 4>& target) {
  const auto source = page_corners(img.width(), img.height());
  if (target == source) return {img, Projective2::identity()};
  if (!is_convex_quad(target)) throw ParameterError("perspective target quadrilateral not convex");
  const Projective2 h = Projective2::from_quad(source, target);
  return {warp(img, h), h};
}

}  // namespace scanfig
