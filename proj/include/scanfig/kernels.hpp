#pragma once

// Data-parallel pixel kernels.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant in use is chosen once at startup from CPUID and can be
// overridden with SCANFIG_ISA=scalar|avx2 or set_isa(). Every variant performs
// the same floating-point operations in the same order, so results are
// bit-identical across variants; tests/unit/test_kernels.cpp enforces this.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace scanfig::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;
bool cpu_supports(Isa isa) noexcept;
Isa active_isa() noexcept;
// Throws ParameterError if the CPU (or build) lacks `isa`.
void set_isa(Isa isa);

// dst[i] = trunc(clamp(127 + alpha * (src[i] - 127), 0, 255)), in float.
void linear_contrast(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, float alpha);

// mask[i] = |a[i] - b[i]| > threshold ? 1 : 0
void absdiff_mask(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                  std::span<std::uint8_t> mask, std::uint8_t threshold);

// dst[i] = round_half_even(clamp(src[i] + delta[i], 0, 255))
void add_clamp(std::span<const std::uint8_t> src, std::span<const float> delta,
               std::span<std::uint8_t> dst);

void u8_to_f32(std::span<const std::uint8_t> src, std::span<float> dst);
// round_half_even(clamp(v, 0, 255))
void f32_to_u8(std::span<const float> src, std::span<std::uint8_t> dst);

// Horizontal correlation of each row with `taps` (odd length, centered),
// replicating edge pixels. Taps accumulate left to right from 0.
void convolve_rows(std::span<const float> src, std::span<float> dst, std::size_t width,
                   std::span<const float> taps);
// Vertical counterpart over a width x (src.size()/width) plane.
void convolve_cols(std::span<const float> src, std::span<float> dst, std::size_t width,
                   std::span<const float> taps);

// Per-variant entry points, exposed for equivalence testing and benchmarks.
// Spans must already be size-checked.
#define SCANFIG_KERNEL_DECLS                                                                 \
  void linear_contrast(const std::uint8_t* src, std::uint8_t* dst, std::size_t n,           \
                       float alpha);                                                        \
  void absdiff_mask(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* mask,       \
                    std::size_t n, std::uint8_t threshold);                                 \
  void add_clamp(const std::uint8_t* src, const float* delta, std::uint8_t* dst,            \
                 std::size_t n);                                                            \
  void u8_to_f32(const std::uint8_t* src, float* dst, std::size_t n);                       \
  void f32_to_u8(const float* src, std::uint8_t* dst, std::size_t n);                       \
  void convolve_rows(const float* src, float* dst, std::size_t width, std::size_t rows,     \
                     const float* taps, std::size_t radius);                                \
  void convolve_cols(const float* src, float* dst, std::size_t width, std::size_t height,   \
                     const float* taps, std::size_t radius);

namespace scalar {
SCANFIG_KERNEL_DECLS
}

#if defined(SCANFIG_HAVE_AVX2)
namespace avx2 {
SCANFIG_KERNEL_DECLS
}
#endif

#undef SCANFIG_KERNEL_DECLS

}  // namespace scanfig::kernels
