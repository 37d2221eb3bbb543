// AVX2 kernels. Compiled with -mavx2 only (no FMA) so that every lane does
// the same separate multiply and add as the scalar reference.

#include <immintrin.h>

#include <algorithm>

#include "scanfig/kernels.hpp"

namespace scanfig::kernels::avx2 {

namespace {

// Eight bytes -> eight floats.
inline __m256 load8_u8_as_f32(const std::uint8_t* p) {
  const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(p));
  return _mm256_cvtepi32_ps(_mm256_cvtepu8_epi32(bytes));
}

// Eight int32 in [0,255] -> eight bytes.
inline void store8_i32_as_u8(std::uint8_t* p, __m256i v) {
  const __m128i lo = _mm256_castsi256_si128(v);
  const __m128i hi = _mm256_extracti128_si256(v, 1);
  const __m128i words = _mm_packus_epi32(lo, hi);
  const __m128i bytes = _mm_packus_epi16(words, words);
  _mm_storel_epi64(reinterpret_cast<__m128i*>(p), bytes);
}

inline __m256 clamp255(__m256 v) {
  return _mm256_min_ps(_mm256_max_ps(v, _mm256_setzero_ps()), _mm256_set1_ps(255.0f));
}

}  // namespace

void linear_contrast(const std::uint8_t* src, std::uint8_t* dst, std::size_t n, float alpha) {
  const __m256 pivot = _mm256_set1_ps(127.0f);
  const __m256 a = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = load8_u8_as_f32(src + i);
    const __m256 r = clamp255(_mm256_add_ps(pivot, _mm256_mul_ps(a, _mm256_sub_ps(v, pivot))));
    store8_i32_as_u8(dst + i, _mm256_cvttps_epi32(r));
  }
  scalar::linear_contrast(src + i, dst + i, n - i, alpha);
}

void absdiff_mask(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* mask, std::size_t n,
                  std::uint8_t threshold) {
  const __m256i thr = _mm256_set1_epi8(static_cast<char>(threshold));
  const __m256i zero = _mm256_setzero_si256();
  const __m256i one = _mm256_set1_epi8(1);
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i diff = _mm256_or_si256(_mm256_subs_epu8(va, vb), _mm256_subs_epu8(vb, va));
    // diff <= thr  <=>  saturating (diff - thr) == 0
    const __m256i within = _mm256_cmpeq_epi8(_mm256_subs_epu8(diff, thr), zero);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(mask + i), _mm256_andnot_si256(within, one));
  }
  scalar::absdiff_mask(a + i, b + i, mask + i, n - i, threshold);
}

void add_clamp(const std::uint8_t* src, const float* delta, std::uint8_t* dst, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_add_ps(load8_u8_as_f32(src + i), _mm256_loadu_ps(delta + i));
    store8_i32_as_u8(dst + i, _mm256_cvtps_epi32(clamp255(v)));
  }
  scalar::add_clamp(src + i, delta + i, dst + i, n - i);
}

void u8_to_f32(const std::uint8_t* src, float* dst, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) _mm256_storeu_ps(dst + i, load8_u8_as_f32(src + i));
  scalar::u8_to_f32(src + i, dst + i, n - i);
}

void f32_to_u8(const float* src, std::uint8_t* dst, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    store8_i32_as_u8(dst + i, _mm256_cvtps_epi32(clamp255(_mm256_loadu_ps(src + i))));
  }
  scalar::f32_to_u8(src + i, dst + i, n - i);
}

void convolve_rows(const float* src, float* dst, std::size_t width, std::size_t rows,
                   const float* taps, std::size_t radius) {
  const std::size_t span = 2 * radius + 1;
  if (width < span + 8) {
    scalar::convolve_rows(src, dst, width, rows, taps, radius);
    return;
  }
  for (std::size_t y = 0; y < rows; ++y) {
    const float* row = src + y * width;
    float* out = dst + y * width;
    std::size_t x = radius;
    for (; x + 8 + radius <= width; x += 8) {
      __m256 acc = _mm256_setzero_ps();
      for (std::size_t k = 0; k < span; ++k) {
        acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_set1_ps(taps[k]),
                                               _mm256_loadu_ps(row + x + k - radius)));
      }
      _mm256_storeu_ps(out + x, acc);
    }
    // Clamped edges: left [0, radius) and the right remainder.
    for (std::size_t xe = 0; xe < radius; ++xe) {
      float acc = 0.0f;
      for (std::size_t k = 0; k < span; ++k) {
        const std::ptrdiff_t sx = std::max<std::ptrdiff_t>(
            static_cast<std::ptrdiff_t>(xe + k) - static_cast<std::ptrdiff_t>(radius), 0);
        acc = acc + taps[k] * row[sx];
      }
      out[xe] = acc;
    }
    const auto last = static_cast<std::ptrdiff_t>(width) - 1;
    for (; x < width; ++x) {
      float acc = 0.0f;
      for (std::size_t k = 0; k < span; ++k) {
        const std::ptrdiff_t sx = std::min<std::ptrdiff_t>(
            static_cast<std::ptrdiff_t>(x + k) - static_cast<std::ptrdiff_t>(radius), last);
        acc = acc + taps[k] * row[sx];
      }
      out[x] = acc;
    }
  }
}

void convolve_cols(const float* src, float* dst, std::size_t width, std::size_t height,
                   const float* taps, std::size_t radius) {
  const std::size_t span = 2 * radius + 1;
  const auto last = static_cast<std::ptrdiff_t>(height) - 1;
  for (std::size_t y = 0; y < height; ++y) {
    float* out = dst + y * width;
    std::size_t x = 0;
    for (; x + 8 <= width; x += 8) {
      __m256 acc = _mm256_setzero_ps();
      for (std::size_t k = 0; k < span; ++k) {
        std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y + k) - static_cast<std::ptrdiff_t>(radius);
        sy = std::clamp<std::ptrdiff_t>(sy, 0, last);
        const float* in = src + static_cast<std::size_t>(sy) * width + x;
        acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_set1_ps(taps[k]), _mm256_loadu_ps(in)));
      }
      _mm256_storeu_ps(out + x, acc);
    }
    for (; x < width; ++x) {
      float acc = 0.0f;
      for (std::size_t k = 0; k < span; ++k) {
        std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y + k) - static_cast<std::ptrdiff_t>(radius);
        sy = std::clamp<std::ptrdiff_t>(sy, 0, last);
        acc = acc + taps[k] * src[static_cast<std::size_t>(sy) * width + x];
      }
      out[x] = acc;
    }
  }
}

}  // namespace scanfig::kernels::avx2
