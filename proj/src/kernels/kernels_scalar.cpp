// Scalar reference kernels. The AVX2 variants must reproduce these bit for
// bit, so keep the arithmetic order in sync when editing either file.

#include <algorithm>
#include <cmath>

#include "scanfig/kernels.hpp"

namespace scanfig::kernels::scalar {

namespace {

inline std::uint8_t round_clamp(float v) {
  v = std::min(std::max(v, 0.0f), 255.0f);
  return static_cast<std::uint8_t>(std::nearbyint(v));
}

inline float correlate_at(const float* row, std::size_t width, std::size_t x, const float* taps,
                          std::size_t radius) {
  const auto last = static_cast<std::ptrdiff_t>(width) - 1;
  float acc = 0.0f;
  for (std::size_t k = 0; k <= 2 * radius; ++k) {
    std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(x + k) - static_cast<std::ptrdiff_t>(radius);
    sx = std::clamp<std::ptrdiff_t>(sx, 0, last);
    acc = acc + taps[k] * row[sx];
  }
  return acc;
}

}  // namespace

void linear_contrast(const std::uint8_t* src, std::uint8_t* dst, std::size_t n, float alpha) {
  for (std::size_t i = 0; i < n; ++i) {
    float v = 127.0f + alpha * (static_cast<float>(src[i]) - 127.0f);
    v = std::min(std::max(v, 0.0f), 255.0f);
    dst[i] = static_cast<std::uint8_t>(v);
  }
}

void absdiff_mask(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* mask, std::size_t n,
                  std::uint8_t threshold) {
  for (std::size_t i = 0; i < n; ++i) {
    const int d = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    mask[i] = d > threshold ? 1 : 0;
  }
}

void add_clamp(const std::uint8_t* src, const float* delta, std::uint8_t* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = round_clamp(static_cast<float>(src[i]) + delta[i]);
}

void u8_to_f32(const std::uint8_t* src, float* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<float>(src[i]);
}

void f32_to_u8(const float* src, std::uint8_t* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = round_clamp(src[i]);
}

void convolve_rows(const float* src, float* dst, std::size_t width, std::size_t rows,
                   const float* taps, std::size_t radius) {
  for (std::size_t y = 0; y < rows; ++y) {
    const float* row = src + y * width;
    float* out = dst + y * width;
    for (std::size_t x = 0; x < width; ++x) out[x] = correlate_at(row, width, x, taps, radius);
  }
}

void convolve_cols(const float* src, float* dst, std::size_t width, std::size_t height,
                   const float* taps, std::size_t radius) {
  const auto last = static_cast<std::ptrdiff_t>(height) - 1;
  for (std::size_t y = 0; y < height; ++y) {
    float* out = dst + y * width;
    for (std::size_t x = 0; x < width; ++x) {
      float acc = 0.0f;
      for (std::size_t k = 0; k <= 2 * radius; ++k) {
        std::ptrdiff_t sy =
            static_cast<std::ptrdiff_t>(y + k) - static_cast<std::ptrdiff_t>(radius);
        sy = std::clamp<std::ptrdiff_t>(sy, 0, last);
        acc = acc + taps[k] * src[static_cast<std::size_t>(sy) * width + x];
      }
      out[x] = acc;
    }
  }
}

}  // namespace scanfig::kernels::scalar
