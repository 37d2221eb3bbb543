#pragma once

// Page images and the pixel-level scanner-appearance transforms.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "scanfig/geometry.hpp"
#include "scanfig/rng.hpp"

namespace scanfig {

inline constexpr std::uint8_t kBackground = 255;

// 8-bit interleaved image, row-major, 1 (gray) or 3 (RGB) channels.
class PageImage {
 public:
  PageImage(int width, int height, int channels, std::uint8_t fill = kBackground);
  PageImage(int width, int height, int channels, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  std::size_t index(int x, int y, int c = 0) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }
  std::uint8_t at(int x, int y, int c = 0) const noexcept { return pixels_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) noexcept { return pixels_[index(x, y, c)]; }

  // Sets every channel of pixels inside `box` (pixel-cell convention).
  void fill_rect(const BoundingBox& box, std::uint8_t value);

  friend bool operator==(const PageImage&, const PageImage&) = default;

 private:
  int width_;
  int height_;
  int channels_;
  std::vector<std::uint8_t> pixels_;
};

template <typename Transform>
struct WarpResult {
  PageImage image;
  Transform transform;  // source page coordinates -> output page coordinates
};

// Bilinear resampling of `img` through `t` (source -> destination), same
// canvas size, white outside the source frame.
PageImage warp(const PageImage& img, const Affine2& t);
PageImage warp(const PageImage& img, const Projective2& t);

// Rotation about the image center; positive is counter-clockwise on screen.
WarpResult<Affine2> rotate_affine(const PageImage& img, double degrees);

// v + N(mean, stddev) per channel value, rounded and clamped.
// Throws ParameterError if stddev < 0 or either parameter is non-finite.
PageImage additive_gaussian_noise(const PageImage& img, double mean, double stddev,
                                  RandomSeed seed);

// Each pixel (all channels together) becomes 0 or 255 with probability p.
// Throws ParameterError unless 0 <= p <= 1.
PageImage salt_and_pepper(const PageImage& img, double p, RandomSeed seed);

// Normalized taps of radius ceil(3 sigma); {1} when sigma == 0.
std::vector<float> gaussian_kernel(double sigma);

// Separable Gaussian, clamp-to-edge. Throws ParameterError if sigma < 0.
PageImage gaussian_blur(const PageImage& img, double sigma);

// v -> 127 + alpha (v - 127), clamped and truncated.
// Throws ParameterError if alpha < 0.
PageImage linear_contrast(const PageImage& img, double alpha);

// Image corners in order top-left, top-right, bottom-right, bottom-left.
std::array<Point2, 4> page_corners(int width, int height) noexcept;

// Each corner pulled inward by independent uniform fractions of the page
// size in [0, jitter]. Throws ParameterError unless 0 <= jitter < 0.5.
std::array<Point2, 4> random_perspective_corners(int width, int height, double jitter,
                                                 RandomSeed seed);

// Warps the page rectangle onto `target` (TL, TR, BR, BL).
// Throws ParameterError for a non-convex target, DegenerateWarpError when the
// homography is singular.
WarpResult<Projective2> perspective_warp(const PageImage& img, const std::array<Point2, 4>& target);

inline WarpResult<Projective2> perspective_warp(const PageImage& img, double jitter,
                                                RandomSeed seed) {
  return perspective_warp(img, random_perspective_corners(img.width(), img.height(), jitter, seed));
}

}  // namespace scanfig
