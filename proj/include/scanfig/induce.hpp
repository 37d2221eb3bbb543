#pragma once

// Render-diff label induction: compile a LaTeX source with and without a
// float-framing preamble, rasterize both, subtract page pairs and read the
// frames back as figure boxes.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scanfig/geometry.hpp"
#include "scanfig/raster.hpp"

namespace scanfig {

struct RenderedDocument {
  std::string doc_id;
  int dpi = 100;
  std::vector<PageImage> pages;
};

struct PixelCoord {
  int x = 0;
  int y = 0;
};

// One 8-connected component of differing pixels.
struct DiffRegion {
  std::vector<PixelCoord> pixels;
  BoundingBox envelope;  // pixel-cell envelope, inside the page
};

struct DiffOptions {
  std::uint8_t threshold = 20;     // a channel must differ by more than this
  std::size_t min_region_px = 25;  // smaller components are renderer jitter
};

struct InductionOptions {
  DiffOptions diff;
  double stroke_px = 2.0;          // frame line width at the render DPI
  double merge_overlap = 0.5;      // merge when overlap > this fraction of the smaller box
};

// Frame line width drawn by the injected preamble, in TeX points. At 100 DPI
// this is 2 px.
inline constexpr double kFrameRulePt = 1.44;

// Adds a preamble block that draws a rule frame around every figure and
// table float. Idempotent. Throws ParseError when there is no preamble
// (missing \documentclass or \begin{document}).
std::string inject_box_markup(std::string_view source);

struct RendererConfig {
  // Shell command run once per compile. Placeholders: {input} (the .tex
  // file), {stem}, {workdir}, {outdir} (where page PNGs must appear) and
  // {dpi}. Paths are substituted shell-quoted.
  std::string command_template = kDefaultTemplate;
  std::size_t max_concurrent = 2;

  static constexpr const char* kDefaultTemplate =
      "pdflatex -interaction=nonstopmode -halt-on-error -output-directory {workdir} {input}"
      " && pdftoppm -r {dpi} -png {workdir}/{stem}.pdf {outdir}/page";
  static constexpr const char* kEnvOverride = "SCANFIG_RENDER_CMD";

  // Template from kEnvOverride if set, else `fallback`.
  static RendererConfig from_environment(RendererConfig fallback);
};

// Compiles and rasterizes `source`. Page PNGs are ordered by the number at
// the end of their file name. Throws RendererMissingError when the shell
// reports the command is not found, RendererError (with the renderer's output
// as diagnostic) on any other failure or when no pages are produced.
RenderedDocument render(std::string_view source, int dpi, const RendererConfig& cfg,
                        std::string doc_id = {});

// Throws ParameterError when the images differ in size or channel count.
std::vector<DiffRegion> diff_pages(const PageImage& plain, const PageImage& marked,
                                   const DiffOptions& opts = {});

// Merges overlapping envelopes, then insets each by the stroke width.
// Result is sorted top-to-bottom, left-to-right.
std::vector<BoundingBox> regions_to_labels(const std::vector<DiffRegion>& regions,
                                           double stroke_px = 2.0, double merge_overlap = 0.5);

// Labels for each page pair. Throws InductionAbortError when the page counts
// differ or a page pair differs in size.
std::vector<std::vector<BoundingBox>> induce_labels(const RenderedDocument& plain,
                                                    const RenderedDocument& marked,
                                                    const InductionOptions& opts = {});

}  // namespace scanfig
