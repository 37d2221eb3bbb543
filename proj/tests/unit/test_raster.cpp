#include <cmath>
#include <numeric>

#include "doctest.h"
#include "scanfig/error.hpp"
#include "scanfig/kernels.hpp"
#include "scanfig/raster.hpp"

using namespace scanfig;

namespace {

PageImage gradient_page(int w, int h, int channels = 1) {
  PageImage img(w, h, channels);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        img.at(x, y, c) = static_cast<std::uint8_t>((x * 7 + y * 3 + c * 50) % 256);
      }
    }
  }
  return img;
}

int max_abs_diff(const PageImage& a, const PageImage& b) {
  int worst = 0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) {
    worst = std::max(worst, std::abs(int(a.pixels()[i]) - int(b.pixels()[i])));
  }
  return worst;
}

}  // namespace

TEST_CASE("page image invariants") {
  const PageImage img(13, 7, 3);
  CHECK(img.pixels().size() == 13u * 7u * 3u);
  CHECK_THROWS_AS(PageImage(0, 5, 1), ParameterError);
  CHECK_THROWS_AS(PageImage(5, -1, 1), ParameterError);
  CHECK_THROWS_AS(PageImage(5, 5, 2), ParameterError);
  CHECK_THROWS_AS(PageImage(2, 2, 1, std::vector<std::uint8_t>(3)), ParameterError);
}

TEST_CASE("rotation") {
  const PageImage img = gradient_page(60, 40);
  const auto zero = rotate_affine(img, 0);
  CHECK(zero.image == img);
  CHECK(zero.transform.is_identity());

  // A smooth image survives a full turn up to resampling error.
  PageImage smooth(64, 64, 1);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) smooth.at(x, y) = static_cast<std::uint8_t>(100 + x + y);
  const auto full = rotate_affine(smooth, 360);
  int worst = 0;
  for (int y = 2; y < 62; ++y)
    for (int x = 2; x < 62; ++x)
      worst = std::max(worst, std::abs(int(full.image.at(x, y)) - int(smooth.at(x, y))));
  CHECK(worst <= 2);

  // The rotation center is a fixed point: a single dark pixel stays put.
  PageImage dot(41, 41, 1);
  dot.at(20, 20) = 0;
  const auto turned = rotate_affine(dot, 45);
  int best = 256, bx = -1, by = -1;
  for (int y = 0; y < 41; ++y)
    for (int x = 0; x < 41; ++x)
      if (turned.image.at(x, y) < best) {
        best = turned.image.at(x, y);
        bx = x;
        by = y;
      }
  CHECK(bx == 20);
  CHECK(by == 20);
  CHECK(best < 255);
}

TEST_CASE("rotation direction: positive angles turn counter-clockwise on screen") {
  PageImage img(101, 101, 1);
  img.fill_rect({80, 48, 90, 53}, 0);  // mark right of center
  const auto r = rotate_affine(img, 90);
  // Right of center moves to above center.
  CHECK(r.image.at(50, 15) < 128);
  CHECK(r.image.at(85, 50) == 255);
}

TEST_CASE("additive gaussian noise") {
  const PageImage img = gradient_page(50, 30, 3);
  CHECK(additive_gaussian_noise(img, 0, 0, RandomSeed{1}) == img);
  CHECK(additive_gaussian_noise(img, 0, 10, RandomSeed{5}) ==
        additive_gaussian_noise(img, 0, 10, RandomSeed{5}));
  CHECK_FALSE(additive_gaussian_noise(img, 0, 10, RandomSeed{5}) ==
              additive_gaussian_noise(img, 0, 10, RandomSeed{6}));
  CHECK_THROWS_AS(additive_gaussian_noise(img, 0, -1, RandomSeed{1}), ParameterError);

  const PageImage gray(256, 256, 1, 128);
  const PageImage noisy = additive_gaussian_noise(gray, 0, 10, RandomSeed{42});
  const double sum = std::accumulate(noisy.pixels().begin(), noisy.pixels().end(), 0.0);
  const double mean = sum / static_cast<double>(noisy.pixels().size());
  CHECK(mean >= 126.0);
  CHECK(mean <= 130.0);
  double ss = 0;
  for (auto v : noisy.pixels()) ss += (v - mean) * (v - mean);
  CHECK(std::sqrt(ss / noisy.pixels().size()) == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("salt and pepper") {
  const PageImage img = gradient_page(40, 40, 3);
  CHECK(salt_and_pepper(img, 0, RandomSeed{3}) == img);
  const PageImage all = salt_and_pepper(img, 1, RandomSeed{3});
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 40; ++x) {
      const auto v = all.at(x, y, 0);
      CHECK((v == 0 || v == 255));
      CHECK(all.at(x, y, 1) == v);
      CHECK(all.at(x, y, 2) == v);
    }
  }
  CHECK_THROWS_AS(salt_and_pepper(img, 1.5, RandomSeed{3}), ParameterError);

  const PageImage gray(1000, 1000, 1, 128);
  const PageImage sp = salt_and_pepper(gray, 0.1, RandomSeed{2024});
  const auto altered = std::count_if(sp.pixels().begin(), sp.pixels().end(),
                                     [](std::uint8_t v) { return v != 128; });
  const double fraction = static_cast<double>(altered) / 1e6;
  CHECK(fraction >= 0.095);
  CHECK(fraction <= 0.105);
}

TEST_CASE("gaussian blur") {
  const PageImage img = gradient_page(30, 20);
  CHECK(gaussian_blur(img, 0) == img);
  CHECK(gaussian_kernel(0) == std::vector<float>{1.0f});
  CHECK(gaussian_kernel(0.5).size() == 5u);
  CHECK(gaussian_kernel(1.2).size() == 9u);
  CHECK_THROWS_AS(gaussian_blur(img, -1), ParameterError);

  const PageImage flat(25, 25, 3, 77);
  CHECK(gaussian_blur(flat, 0.5) == flat);
  CHECK(gaussian_blur(flat, 2.5) == flat);

  // Impulse response: the center keeps 255 * w0 where w0 is the 2-D center
  // weight, computed here directly in double precision.
  double taps[5], total = 0;
  for (int i = 0; i < 5; ++i) {
    taps[i] = std::exp(-(i - 2) * (i - 2) / (2 * 0.25));
    total += taps[i];
  }
  double w0 = 0, w2d_total = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double w = taps[i] * taps[j] / (total * total);
      w2d_total += w;
      if (i == 2 && j == 2) w0 = w;
    }
  CHECK(w2d_total == doctest::Approx(1.0));
  CHECK(255 * w0 == doctest::Approx(157.77).epsilon(1e-3));

  PageImage impulse(21, 21, 1, 0);
  impulse.at(10, 10) = 255;
  const PageImage blurred = gaussian_blur(impulse, 0.5);
  CHECK(std::abs(int(blurred.at(10, 10)) - 255 * w0) <= 0.5 + 1e-6);
  CHECK(blurred.at(10, 10) == 158);
  CHECK(blurred.at(9, 10) == blurred.at(11, 10));
  CHECK(blurred.at(10, 9) == blurred.at(10, 11));
  CHECK(blurred.at(0, 0) == 0);
}

TEST_CASE("linear contrast") {
  const PageImage img = gradient_page(16, 16, 3);
  CHECK(linear_contrast(img, 1.0) == img);
  const PageImage zero = linear_contrast(img, 0.0);
  for (auto v : zero.pixels()) CHECK(v == 127);
  const PageImage one(1, 1, 1, 200);
  CHECK(linear_contrast(one, 1.5).at(0, 0) == 236);
  CHECK_THROWS_AS(linear_contrast(img, -0.1), ParameterError);
}

TEST_CASE("perspective") {
  const PageImage img = gradient_page(100, 100);
  const auto none = perspective_warp(img, 0.0, RandomSeed{9});
  CHECK(none.image == img);
  CHECK(none.transform.is_identity());

  const auto a = perspective_warp(img, 0.1, RandomSeed{9});
  const auto b = perspective_warp(img, 0.1, RandomSeed{9});
  CHECK(a.image == b.image);
  CHECK(a.transform.matrix() == b.transform.matrix());

  const std::array<Point2, 4> target{{{10, 10}, {100, 0}, {100, 100}, {0, 100}}};
  const auto moved = perspective_warp(img, target);
  const Point2 p = moved.transform.apply({0, 0});
  CHECK(p.x == doctest::Approx(10).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(10).epsilon(1e-12));
  // The uncovered corner triangle is background.
  CHECK(moved.image.at(2, 2) == 255);

  const auto corners = random_perspective_corners(200, 100, 0.2, RandomSeed{4});
  CHECK(corners[0].x >= 0);
  CHECK(corners[0].x <= 40);
  CHECK(corners[0].y >= 0);
  CHECK(corners[0].y <= 20);
  CHECK(corners[2].x >= 160);
  CHECK(corners[2].y >= 80);
  CHECK_THROWS_AS(random_perspective_corners(10, 10, 0.5, RandomSeed{1}), ParameterError);
  CHECK_THROWS_AS(perspective_warp(img, {{{0, 0}, {100, 100}, {100, 0}, {0, 100}}}),
                  ParameterError);
}

TEST_CASE("raster results do not depend on the kernel variant") {
  if (!kernels::cpu_supports(kernels::Isa::avx2)) return;
  const kernels::Isa before = kernels::active_isa();
  const PageImage img = gradient_page(123, 77, 3);
  auto run = [&](kernels::Isa isa) {
    kernels::set_isa(isa);
    return std::vector<PageImage>{gaussian_blur(img, 0.5), gaussian_blur(img, 1.7),
                                  linear_contrast(img, 1.5),
                                  additive_gaussian_noise(img, 2, 10, RandomSeed{8})};
  };
  const auto s = run(kernels::Isa::scalar);
  const auto v = run(kernels::Isa::avx2);
  kernels::set_isa(before);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(max_abs_diff(s[i], v[i]) == 0);
}
