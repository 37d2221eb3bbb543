#include <atomic>
#include <cstdlib>
#include <string>

#include "scanfig/error.hpp"
#include "scanfig/kernels.hpp"

namespace scanfig::kernels {

namespace {

struct Table {
  Isa isa;
  decltype(&scalar::linear_contrast) linear_contrast;
  decltype(&scalar::absdiff_mask) absdiff_mask;
  decltype(&scalar::add_clamp) add_clamp;
  decltype(&scalar::u8_to_f32) u8_to_f32;
  decltype(&scalar::f32_to_u8) f32_to_u8;
  decltype(&scalar::convolve_rows) convolve_rows;
  decltype(&scalar::convolve_cols) convolve_cols;
};

constexpr Table kScalar{Isa::scalar,        scalar::linear_contrast, scalar::absdiff_mask,
                        scalar::add_clamp,  scalar::u8_to_f32,       scalar::f32_to_u8,
                        scalar::convolve_rows, scalar::convolve_cols};

#if defined(SCANFIG_HAVE_AVX2)
constexpr Table kAvx2{Isa::avx2,        avx2::linear_contrast, avx2::absdiff_mask,
                      avx2::add_clamp,  avx2::u8_to_f32,       avx2::f32_to_u8,
                      avx2::convolve_rows, avx2::convolve_cols};
#endif

const Table* table_for(Isa isa) {
#if defined(SCANFIG_HAVE_AVX2)
  if (isa == Isa::avx2) return &kAvx2;
#endif
  (void)isa;
  return &kScalar;
}

const Table* initial_table() {
  if (const char* env = std::getenv("SCANFIG_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &kScalar;
    if (want == "avx2" && cpu_supports(Isa::avx2)) return table_for(Isa::avx2);
  }
  return cpu_supports(Isa::avx2) ? table_for(Isa::avx2) : &kScalar;
}

std::atomic<const Table*>& active() {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

const Table& current() { return *active().load(std::memory_order_acquire); }

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ParameterError(std::string(what) + ": span sizes differ");
}

std::size_t checked_radius(std::span<const float> taps) {
  if (taps.empty() || taps.size() % 2 == 0) {
    throw ParameterError("convolution taps must have odd length");
  }
  return taps.size() / 2;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool cpu_supports(Isa isa) noexcept {
  if (isa == Isa::scalar) return true;
#if defined(SCANFIG_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() noexcept { return current().isa; }

void set_isa(Isa isa) {
  if (!cpu_supports(isa)) {
    throw ParameterError("instruction set not available: " + std::string(isa_name(isa)));
  }
  active().store(table_for(isa), std::memory_order_release);
}

void linear_contrast(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, float alpha) {
  require_same(src.size(), dst.size(), "linear_contrast");
  current().linear_contrast(src.data(), dst.data(), src.size(), alpha);
}

void absdiff_mask(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                  std::span<std::uint8_t> mask, std::uint8_t threshold) {
  require_same(a.size(), b.size(), "absdiff_mask");
  require_same(a.size(), mask.size(), "absdiff_mask");
  current().absdiff_mask(a.data(), b.data(), mask.data(), a.size(), threshold);
}

void add_clamp(std::span<const std::uint8_t> src, std::span<const float> delta,
               std::span<std::uint8_t> dst) {
  require_same(src.size(), delta.size(), "add_clamp");
  require_same(src.size(), dst.size(), "add_clamp");
  current().add_clamp(src.data(), delta.data(), dst.data(), src.size());
}

void u8_to_f32(std::span<const std::uint8_t> src, std::span<float> dst) {
  require_same(src.size(), dst.size(), "u8_to_f32");
  current().u8_to_f32(src.data(), dst.data(), src.size());
}

void f32_to_u8(std::span<const float> src, std::span<std::uint8_t> dst) {
  require_same(src.size(), dst.size(), "f32_to_u8");
  current().f32_to_u8(src.data(), dst.data(), src.size());
}

void convolve_rows(std::span<const float> src, std::span<float> dst, std::size_t width,
                   std::span<const float> taps) {
  require_same(src.size(), dst.size(), "convolve_rows");
  if (width == 0 || src.size() % width != 0) throw ParameterError("convolve_rows: bad width");
  current().convolve_rows(src.data(), dst.data(), width, src.size() / width, taps.data(),
                          checked_radius(taps));
}

void convolve_cols(std::span<const float> src, std::span<float> dst, std::size_t width,
                   std::span<const float> taps) {
  require_same(src.size(), dst.size(), "convolve_cols");
  if (width == 0 || src.size() % width != 0) throw ParameterError("convolve_cols: bad width");
  current().convolve_cols(src.data(), dst.data(), width, src.size() / width, taps.data(),
                          checked_radius(taps));
}

}  // namespace scanfig::kernels
