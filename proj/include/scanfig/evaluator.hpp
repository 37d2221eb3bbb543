#pragma once

// Detection scoring: confidence filtering, minimum-cost center-distance
// assignment, IOU-thresholded TP/FP/FN classification and aggregation.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "scanfig/dataset.hpp"
#include "scanfig/geometry.hpp"

namespace scanfig {

struct MatchConfig {
  double confidence_threshold = 0.5;  // kept when confidence >= threshold
  double iou_threshold = 0.8;         // true positive when iou >= threshold

  // Throws ParameterError unless both lie in [0,1].
  void validate() const;
};

// Dense row-major cost matrix.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// Minimum-total-cost assignment of min(rows, cols) pairs, each row and
// column used at most once; pairs are sorted by row. Throws InputError for a
// negative or non-finite entry.
std::vector<std::pair<std::size_t, std::size_t>> hungarian_assign(const CostMatrix& cost);

// Keeps predictions with confidence >= threshold, preserving order.
std::vector<Prediction> filter_predictions(const std::vector<Prediction>& preds,
                                           const MatchConfig& cfg);

struct Match {
  std::size_t prediction = 0;    // index into the unfiltered prediction list
  std::size_t ground_truth = 0;  // index into the ground-truth list
  double iou = 0.0;
  double center_distance = 0.0;
};

struct PageEval {
  std::string page_id;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<Match> matches;  // sorted by ground-truth index
};

// Filters, assigns by center distance, then classifies each assigned pair by
// IOU: a pair below the threshold is one FP plus one FN. Unassigned
// predictions are FPs, unassigned ground truths FNs. Inputs are put in a
// canonical geometric order before assignment, so the result (up to index
// relabeling) does not depend on input order.
PageEval match_page(const std::vector<BoundingBox>& gt, const std::vector<Prediction>& preds,
                    const MatchConfig& cfg, std::string page_id = {});

struct CorpusMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// 2PR/(P+R), or 0 when P+R == 0.
double f1_score(double precision, double recall) noexcept;

// Precision/recall/F1 from counts, with the empty-set conventions:
// recall is 1 when tp+fn == 0; precision is 1 when tp+fp == 0 and tp+fn == 0,
// and 0 when tp+fp == 0 otherwise.
CorpusMetrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) noexcept;

enum class Aggregation {
  micro,  // sum counts over pages, then compute metrics
  macro,  // average per-page precision and recall; F1 from those averages
};

// Throws PreconditionError for an empty page list.
CorpusMetrics aggregate(const std::vector<PageEval>& pages,
                        Aggregation mode = Aggregation::micro);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

struct FoldStatistics {
  MeanStd precision;
  MeanStd recall;
  MeanStd f1;
};

enum class StdConvention { sample, population };

// Throws PreconditionError for fewer than two folds.
FoldStatistics fold_statistics(const std::vector<CorpusMetrics>& per_fold,
                               StdConvention convention = StdConvention::sample);

// Scores every page of `ground_truth`; predictions for pages without ground
// truth are ignored.
std::vector<PageEval> evaluate_corpus(const AnnotationMap& ground_truth,
                                      const PredictionSet& predictions, const MatchConfig& cfg);

}  // namespace scanfig
