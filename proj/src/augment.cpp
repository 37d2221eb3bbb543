#include "scanfig/augment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "latex_text.hpp"
#include "scanfig/error.hpp"

namespace scanfig {

namespace {

constexpr std::array<std::string_view, 9> kNames = {
    "affine_rotation", "gaussian_noise",  "salt_pepper",     "gaussian_blur",    "linear_contrast",
    "perspective",     "font_size_12pt", "typewriter_font", "line_spacing_1_5",
};

constexpr std::string_view kTypewriterLines[] = {
    "\\renewcommand\\ttdefault{cmvtt}",
    "\\renewcommand{\\familydefault}{\\ttdefault}",
};
constexpr std::string_view kLineSpacingLine = "\\linespread{1.5}";

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view transform_name(Transform t) noexcept { return kNames[static_cast<std::size_t>(t)]; }

Transform transform_from_name(std::string_view name) {
  for (Transform t : kAllTransforms) {
    if (transform_name(t) == name) return t;
  }
  throw ParseError("unknown transform '" + std::string(name) + "'");
}

bool is_geometric(Transform t) noexcept {
  return t == Transform::affine_rotation || t == Transform::perspective;
}

bool AugmentationConfig::all_enabled() const noexcept {
  return std::all_of(enabled.begin(), enabled.end(), [](bool b) { return b; });
}

AugmentationConfig AugmentationConfig::none() {
  AugmentationConfig cfg;
  cfg.enabled.fill(false);
  return cfg;
}

void AugmentationConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(rotation_range) || rotation_range < 0) {
    throw ParameterError("rotation_range must be >= 0");
  }
  if (!finite(noise_mean)) throw ParameterError("noise_mean must be finite");
  if (!finite(noise_stddev) || noise_stddev < 0) throw ParameterError("noise_stddev must be >= 0");
  if (!(sp_probability >= 0 && sp_probability <= 1)) {
    throw ParameterError("sp_probability must be in [0,1]");
  }
  if (!finite(blur_sigma) || blur_sigma < 0) throw ParameterError("blur_sigma must be >= 0");
  if (!finite(contrast_alpha) || contrast_alpha < 0) {
    throw ParameterError("contrast_alpha must be >= 0");
  }
  if (!(perspective_jitter >= 0 && perspective_jitter < 0.5)) {
    throw ParameterError("perspective_jitter must be in [0, 0.5)");
  }
}

AugmentationConfig AugmentationConfig::parse(std::string_view text) {
  return parse(text, AugmentationConfig{});
}

AugmentationConfig AugmentationConfig::parse(std::string_view text, AugmentationConfig cfg) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    const std::size_t offset = start;
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ParseError(where + ": expected key = value", offset);
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    auto as_double = [&]() {
      double v = 0;
      const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ParseError(where + ": '" + std::string(key) + "' needs a number", offset);
      }
      return v;
    };

    bool matched = false;
    for (Transform t : kAllTransforms) {
      if (key != transform_name(t)) continue;
      matched = true;
      if (value == "true" || value == "on" || value == "1") cfg.set_enabled(t, true);
      else if (value == "false" || value == "off" || value == "0") cfg.set_enabled(t, false);
      else throw ParseError(where + ": '" + std::string(key) + "' needs true or false", offset);
    }
    if (matched) continue;
    if (key == "rotation_range") cfg.rotation_range = as_double();
    else if (key == "noise_mean") cfg.noise_mean = as_double();
    else if (key == "noise_stddev") cfg.noise_stddev = as_double();
    else if (key == "sp_probability") cfg.sp_probability = as_double();
    else if (key == "blur_sigma") cfg.blur_sigma = as_double();
    else if (key == "contrast_alpha") cfg.contrast_alpha = as_double();
    else if (key == "perspective_jitter") cfg.perspective_jitter = as_double();
    else if (key == "seed") {
      std::uint64_t v = 0;
      const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ParseError(where + ": seed must be an unsigned integer", offset);
      }
      cfg.seed = RandomSeed{v};
    } else {
      throw ParseError(where + ": unknown key '" + std::string(key) + "'", offset);
    }
  }
  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return cfg;
}

std::string AugmentationConfig::to_text() const {
  std::string out;
  for (Transform t : kAllTransforms) {
    out += std::string(transform_name(t)) + " = " + (is_enabled(t) ? "true" : "false") + "\n";
  }
  out += "rotation_range = " + format_double(rotation_range) + "\n";
  out += "noise_mean = " + format_double(noise_mean) + "\n";
  out += "noise_stddev = " + format_double(noise_stddev) + "\n";
  out += "sp_probability = " + format_double(sp_probability) + "\n";
  out += "blur_sigma = " + format_double(blur_sigma) + "\n";
  out += "contrast_alpha = " + format_double(contrast_alpha) + "\n";
  out += "perspective_jitter = " + format_double(perspective_jitter) + "\n";
  out += "seed = " + std::to_string(seed.value) + "\n";
  return out;
}

RandomSeed page_seed(RandomSeed document_seed, std::uint64_t page_index) noexcept {
  return derive_seed(document_seed, page_index);
}

namespace {

RandomSeed transform_seed(RandomSeed page, Transform t) {
  // Offset keeps transform streams apart from page-index streams.
  return derive_seed(page, 0x5452414E00000000ULL + static_cast<std::uint64_t>(t));
}

using Quad = std::array<Point2, 4>;

// Boxes ride through consecutive geometric steps as corner quads; taking the
// envelope only once avoids inflating it at every step.
void map_quads(const Affine2& t, std::vector<Quad>& quads) {
  for (Quad& q : quads)
    for (Point2& p : q) p = t.apply(p);
}

void map_quads(const Projective2& t, std::vector<Quad>& quads) {
  for (Quad& q : quads) {
    const bool positive = t.weight(q[0]) > 0;
    for (const Point2& p : q) {
      if ((t.weight(p) > 0) != positive) {
        throw DegenerateWarpError("box straddles the horizon of the perspective warp");
      }
    }
    for (Point2& p : q) p = t.apply(p);
  }
}

}  // namespace

PipelineResult apply_pipeline_logged(const AnnotatedPage& page, const AugmentationConfig& cfg) {
  cfg.validate();
  PipelineResult result{page, {}};
  PageImage& img = result.page.image;
  std::vector<BoundingBox>& boxes = result.page.boxes;
  std::vector<Quad> quads;
  for (const BoundingBox& b : boxes) quads.push_back(b.corners());
  bool moved = false;

  for (Transform t : kImageTransformOrder) {
    if (!cfg.is_enabled(t)) continue;
    const RandomSeed seed = transform_seed(cfg.seed, t);
    AppliedTransform log{t, seed, {}};
    switch (t) {
      case Transform::affine_rotation: {
        const double u = CounterRng(seed).uniform01(0);
        const double degrees = cfg.rotation_range == 0.0 ? 0.0 : (2.0 * u - 1.0) * cfg.rotation_range;
        auto [out, affine] = rotate_affine(img, degrees);
        img = std::move(out);
        map_quads(affine, quads);
        moved = true;
        log.params["degrees"] = degrees;
        break;
      }
      case Transform::perspective: {
        const auto corners =
            random_perspective_corners(img.width(), img.height(), cfg.perspective_jitter, seed);
        auto [out, homography] = perspective_warp(img, corners);
        img = std::move(out);
        map_quads(homography, quads);
        moved = true;
        log.params["jitter"] = cfg.perspective_jitter;
        static constexpr const char* kCorner[4] = {"tl", "tr", "br", "bl"};
        for (std::size_t i = 0; i < 4; ++i) {
          log.params[std::string(kCorner[i]) + "_x"] = corners[i].x;
          log.params[std::string(kCorner[i]) + "_y"] = corners[i].y;
        }
        break;
      }
      case Transform::gaussian_blur:
        img = gaussian_blur(img, cfg.blur_sigma);
        log.params["sigma"] = cfg.blur_sigma;
        break;
      case Transform::gaussian_noise:
        img = additive_gaussian_noise(img, cfg.noise_mean, cfg.noise_stddev, seed);
        log.params["mean"] = cfg.noise_mean;
        log.params["stddev"] = cfg.noise_stddev;
        break;
      case Transform::salt_pepper:
        img = salt_and_pepper(img, cfg.sp_probability, seed);
        log.params["p"] = cfg.sp_probability;
        break;
      case Transform::linear_contrast:
        img = linear_contrast(img, cfg.contrast_alpha);
        log.params["alpha"] = cfg.contrast_alpha;
        break;
      default:
        break;
    }
    result.applied.push_back(std::move(log));
  }

  if (moved) {
    std::vector<BoundingBox> kept;
    for (const Quad& q : quads) {
      const BoundingBox c = BoundingBox::envelope(q).clipped(img.width(), img.height());
      if (c.area() >= 1.0) kept.push_back(c);
    }
    boxes = std::move(kept);
  }
  return result;
}

std::string transform_latex_source(std::string_view source, const AugmentationConfig& cfg) {
  const bool font = cfg.is_enabled(Transform::font_size_12pt);
  const bool typewriter = cfg.is_enabled(Transform::typewriter_font);
  const bool spacing = cfg.is_enabled(Transform::line_spacing_1_5);
  if (!font && !typewriter && !spacing) return std::string(source);

  const auto decls = latex::find_control_word(source, "\\documentclass");
  if (decls.empty()) throw ParseError("no \\documentclass declaration found");
  if (decls.size() > 1) {
    throw AmbiguityError("found " + std::to_string(decls.size()) + " \\documentclass declarations",
                         decls[1]);
  }
  std::string out(source);

  // Preamble directives first: they sit after the declaration, so editing
  // the declaration afterwards does not invalidate this offset.
  if (typewriter || spacing) {
    const std::size_t begin = latex::find_begin_document(out);
    if (begin == std::string::npos) throw ParseError("no \\begin{document} found");
    std::string block;
    if (typewriter) {
      for (std::string_view line : kTypewriterLines) {
        if (!latex::contains_line(out.substr(0, begin), line)) block += std::string(line) + "\n";
      }
    }
    if (spacing && !latex::contains_line(out.substr(0, begin), kLineSpacingLine)) {
      block += std::string(kLineSpacingLine) + "\n";
    }
    out.insert(begin, block);
  }

  if (font) {
    std::size_t i = decls[0] + std::string_view("\\documentclass").size();
    while (i < out.size() && (out[i] == ' ' || out[i] == '\t')) ++i;
    if (i < out.size() && out[i] == '[') {
      const std::size_t close = out.find(']', i);
      if (close == std::string::npos) throw ParseError("unterminated \\documentclass options", i);
      // Rewrite the option list: drop other base sizes, append 12pt once.
      std::string options;
      bool has12 = false;
      std::string_view list(out.data() + i + 1, close - i - 1);
      std::size_t s = 0;
      while (s <= list.size()) {
        std::size_t e = list.find(',', s);
        if (e == std::string_view::npos) e = list.size();
        const std::string_view opt = trim(list.substr(s, e - s));
        s = e + 1;
        if (opt == "10pt" || opt == "11pt") continue;
        if (opt == "12pt") has12 = true;
        if (opt.empty()) continue;
        if (!options.empty()) options += ",";
        options += opt;
      }
      if (!has12) options += options.empty() ? "12pt" : ",12pt";
      out.replace(i + 1, close - i - 1, options);
    } else {
      out.insert(i, "[12pt]");
    }
  }
  return out;
}

std::vector<AugmentationConfig> leave_one_out_configs(const AugmentationConfig& base) {
  if (!base.all_enabled()) {
    throw PreconditionError("leave-one-out ablation needs a base config with all transforms enabled");
  }
  std::vector<AugmentationConfig> out;
  out.reserve(kAllTransforms.size());
  for (Transform t : kAllTransforms) {
    AugmentationConfig cfg = base;
    cfg.set_enabled(t, false);
    out.push_back(cfg);
  }
  return out;
}

}  // namespace scanfig
