#pragma once

// Annotation and dataset files: VIA projects, the ScanBank-style manifest,
// detector prediction records, and the validation/test and k-fold splits.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scanfig/geometry.hpp"
#include "scanfig/rng.hpp"

namespace scanfig {

// page_id -> boxes; page ids are VIA file names or manifest page ids.
using AnnotationMap = std::map<std::string, std::vector<BoundingBox>>;

// Accepts a full VIA project (with "_via_img_metadata") or the bare
// image-metadata object VIA exports. Region lists may be arrays or the VIA 1
// object form. Throws ParseError (with byte offset) for malformed JSON,
// UnsupportedShapeError for non-"rect" regions.
AnnotationMap parse_via(std::string_view text);

// VIA project JSON. Integral coordinates are written as integers; widths are
// chosen so that x + width reproduces x2 exactly.
std::string emit_via(const AnnotationMap& annotations);

struct ManifestEntry {
  std::string etd_url;
  std::string doc_id;
  int page_count = 0;
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

// "<doc_id>_<page_index>" with a 0-based index.
std::string make_page_id(std::string_view doc_id, int page_index);

struct ScanBankManifest {
  std::vector<ManifestEntry> entries;
  AnnotationMap annotations;

  // Every page of every document, in manifest order.
  std::vector<std::string> page_ids() const;
  // Throws ValidationError when an annotation names an unknown document, an
  // out-of-range page, or a box with negative coordinates.
  void validate() const;

  // Throws ParseError / ValidationError.
  static ScanBankManifest parse(std::string_view text);
  std::string to_json() const;
};

struct HalfSplit {
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

struct Fold {
  std::vector<std::string> train;
  std::vector<std::string> held_out;
};

// Both splits depend only on the set of page ids and the seed: ids are
// sorted before the seeded Fisher-Yates shuffle, and every output list is
// returned sorted. Duplicate ids throw PreconditionError.

// First ceil(n/2) shuffled pages go to validation. Needs n >= 2.
HalfSplit split_half(std::vector<std::string> pages, RandomSeed seed);

// Fold sizes differ by at most one; the first n % k folds are larger.
// Needs 2 <= k <= n.
std::vector<Fold> k_fold(std::vector<std::string> pages, int k, RandomSeed seed);

struct Prediction {
  BoundingBox box;
  double confidence = 0.0;
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

using PredictionSet = std::map<std::string, std::vector<Prediction>>;

struct PredictionFile {
  PredictionSet predictions;
  std::vector<std::string> warnings;
};

// Comma-separated records "page_id,x1,y1,x2,y2,confidence", one per line.
// Blank lines and lines starting with '#' are skipped, as is a header line
// starting with "page_id". Throws ValidationError naming the 1-based line for
// bad field counts, numbers, boxes, or confidences outside [0,1]. When
// `known_pages` is given, records for other pages are kept and warned about.
PredictionFile parse_predictions(std::string_view text,
                                 const std::set<std::string>* known_pages = nullptr);

std::string emit_predictions(const PredictionSet& predictions);

}  // namespace scanfig
