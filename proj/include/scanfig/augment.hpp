#pragma once

// The scanned-appearance augmentation pipeline: image transforms with box
// co-transformation, LaTeX source edits, and leave-one-out ablation configs.

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scanfig/geometry.hpp"
#include "scanfig/raster.hpp"
#include "scanfig/rng.hpp"

namespace scanfig {

enum class Transform {
  affine_rotation,
  gaussian_noise,
  salt_pepper,
  gaussian_blur,
  linear_contrast,
  perspective,
  font_size_12pt,
  typewriter_font,
  line_spacing_1_5,
};

inline constexpr std::array<Transform, 9> kAllTransforms = {
    Transform::affine_rotation, Transform::gaussian_noise,  Transform::salt_pepper,
    Transform::gaussian_blur,   Transform::linear_contrast, Transform::perspective,
    Transform::font_size_12pt,  Transform::typewriter_font, Transform::line_spacing_1_5,
};

// Order in which image transforms run: geometric first, then photometric.
inline constexpr std::array<Transform, 6> kImageTransformOrder = {
    Transform::affine_rotation, Transform::perspective,  Transform::gaussian_blur,
    Transform::gaussian_noise,  Transform::salt_pepper, Transform::linear_contrast,
};

std::string_view transform_name(Transform t) noexcept;
// Throws ParseError for an unknown name.
Transform transform_from_name(std::string_view name);
bool is_geometric(Transform t) noexcept;

struct AugmentationConfig {
  std::array<bool, 9> enabled{true, true, true, true, true, true, true, true, true};

  double rotation_range = 1.0;  // angle ~ U[-range, +range] degrees
  double noise_mean = 0.0;
  double noise_stddev = 10.0;   // intensity units
  double sp_probability = 0.1;
  double blur_sigma = 0.5;
  double contrast_alpha = 1.0;
  double perspective_jitter = 0.05;  // fraction of page size
  RandomSeed seed{};

  bool is_enabled(Transform t) const noexcept { return enabled[static_cast<std::size_t>(t)]; }
  void set_enabled(Transform t, bool on) noexcept { enabled[static_cast<std::size_t>(t)] = on; }
  bool all_enabled() const noexcept;

  static AugmentationConfig none();

  // Throws ParameterError when a parameter is out of range.
  void validate() const;

  // `key = value` text, one per line, '#' comments. Keys are the transform
  // names (true/false) plus the parameter field names above and `seed`.
  // Unknown keys and malformed values throw ParseError naming the line.
  static AugmentationConfig parse(std::string_view text, AugmentationConfig base);
  static AugmentationConfig parse(std::string_view text);
  std::string to_text() const;

  friend bool operator==(const AugmentationConfig&, const AugmentationConfig&) = default;
};

struct AnnotatedPage {
  std::string page_id;
  PageImage image;
  std::vector<BoundingBox> boxes;
};

// What one pipeline step did, for the per-image metadata sidecar.
struct AppliedTransform {
  Transform kind;
  RandomSeed seed;
  std::map<std::string, double> params;
};

struct PipelineResult {
  AnnotatedPage page;
  std::vector<AppliedTransform> applied;
};

// Seed of page `page_index` within a document seeded by `document_seed`.
RandomSeed page_seed(RandomSeed document_seed, std::uint64_t page_index) noexcept;

// Runs the enabled image transforms in kImageTransformOrder using cfg.seed.
// Box corners follow every geometric step; each box becomes the envelope of
// its mapped corners (transform_box for a single step), is clipped to the
// frame and dropped when smaller than 1 px^2.
PipelineResult apply_pipeline_logged(const AnnotatedPage& page, const AugmentationConfig& cfg);

inline AnnotatedPage apply_pipeline(const AnnotatedPage& page, const AugmentationConfig& cfg) {
  return apply_pipeline_logged(page, cfg).page;
}

// Applies the enabled LaTeX transforms. Throws ParseError when there is no
// \documentclass (or no \begin{document} while a preamble edit is needed),
// AmbiguityError when there is more than one \documentclass.
std::string transform_latex_source(std::string_view source, const AugmentationConfig& cfg);

// Nine configs, the i-th with exactly the i-th transform of kAllTransforms
// disabled. Throws PreconditionError unless `base` has all nine enabled.
std::vector<AugmentationConfig> leave_one_out_configs(const AugmentationConfig& base);

}  // namespace scanfig
