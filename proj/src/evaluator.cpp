#include "scanfig/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "scanfig/error.hpp"

namespace scanfig {

void MatchConfig::validate() const {
  if (!(confidence_threshold >= 0 && confidence_threshold <= 1)) {
    throw ParameterError("confidence threshold must be in [0,1]");
  }
  if (!(iou_threshold >= 0 && iou_threshold <= 1)) {
    throw ParameterError("IOU threshold must be in [0,1]");
  }
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) throw ParameterError("cost matrix size mismatch");
}

std::vector<std::pair<std::size_t, std::size_t>> hungarian_assign(const CostMatrix& cost) {
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    for (std::size_t c = 0; c < cost.cols(); ++c) {
      const double v = cost(r, c);
      if (!std::isfinite(v) || v < 0) {
        throw InputError("cost entry (" + std::to_string(r) + "," + std::to_string(c) +
                         ") is negative or non-finite");
      }
    }
  }
  if (cost.rows() == 0 || cost.cols() == 0) return {};

  // Shortest augmenting paths with dual potentials (Kuhn-Munkres in the
  // O(n^2 m) form). Requires n <= m, so work on the transpose otherwise.
  const bool transposed = cost.rows() > cost.cols();
  const std::size_t n = transposed ? cost.cols() : cost.rows();
  const std::size_t m = transposed ? cost.rows() : cost.cols();
  auto a = [&](std::size_t i, std::size_t j) {  // 1-based
    return transposed ? cost(j - 1, i - 1) : cost(i - 1, j - 1);
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    if (transposed) pairs.emplace_back(j - 1, p[j] - 1);
    else pairs.emplace_back(p[j] - 1, j - 1);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::vector<Prediction> filter_predictions(const std::vector<Prediction>& preds,
                                           const MatchConfig& cfg) {
  std::vector<Prediction> kept;
  std::copy_if(preds.begin(), preds.end(), std::back_inserter(kept),
               [&](const Prediction& p) { return p.confidence >= cfg.confidence_threshold; });
  return kept;
}

namespace {

auto box_key(const BoundingBox& b) { return std::make_tuple(b.x1(), b.y1(), b.x2(), b.y2()); }

}  // namespace

PageEval match_page(const std::vector<BoundingBox>& gt, const std::vector<Prediction>& preds,
                    const MatchConfig& cfg, std::string page_id) {
  cfg.validate();
  PageEval out;
  out.page_id = std::move(page_id);

  std::vector<std::size_t> pred_idx;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].confidence >= cfg.confidence_threshold) pred_idx.push_back(i);
  }
  std::vector<std::size_t> gt_idx(gt.size());
  std::iota(gt_idx.begin(), gt_idx.end(), 0);

  // Canonical order: geometry first, so equal inputs in any order produce
  // the same cost matrix.
  std::stable_sort(pred_idx.begin(), pred_idx.end(), [&](std::size_t a, std::size_t b) {
    return std::tuple_cat(box_key(preds[a].box), std::make_tuple(preds[a].confidence)) <
           std::tuple_cat(box_key(preds[b].box), std::make_tuple(preds[b].confidence));
  });
  std::stable_sort(gt_idx.begin(), gt_idx.end(),
                   [&](std::size_t a, std::size_t b) { return box_key(gt[a]) < box_key(gt[b]); });

  CostMatrix cost(pred_idx.size(), gt_idx.size());
  for (std::size_t r = 0; r < pred_idx.size(); ++r) {
    for (std::size_t c = 0; c < gt_idx.size(); ++c) {
      cost(r, c) = center_distance(preds[pred_idx[r]].box, gt[gt_idx[c]]);
    }
  }

  const auto pairs = hungarian_assign(cost);
  for (const auto& [r, c] : pairs) {
    const Prediction& p = preds[pred_idx[r]];
    const BoundingBox& g = gt[gt_idx[c]];
    const double overlap = iou(p.box, g);
    out.matches.push_back({pred_idx[r], gt_idx[c], overlap, cost(r, c)});
    if (overlap >= cfg.iou_threshold) {
      ++out.tp;
    } else {
      ++out.fp;
      ++out.fn;
    }
  }
  out.fp += pred_idx.size() - pairs.size();
  out.fn += gt.size() - pairs.size();
  std::sort(out.matches.begin(), out.matches.end(),
            [](const Match& a, const Match& b) { return a.ground_truth < b.ground_truth; });
  return out;
}

double f1_score(double precision, double recall) noexcept {
  const double sum = precision + recall;
  return sum > 0 ? 2.0 * precision * recall / sum : 0.0;
}

CorpusMetrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) noexcept {
  CorpusMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  else m.precision = (tp + fn == 0) ? 1.0 : 0.0;
  m.recall = (tp + fn > 0) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

CorpusMetrics aggregate(const std::vector<PageEval>& pages, Aggregation mode) {
  if (pages.empty()) throw PreconditionError("cannot aggregate an empty page list");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const PageEval& p : pages) {
    tp += p.tp;
    fp += p.fp;
    fn += p.fn;
  }
  if (mode == Aggregation::micro) return metrics_from_counts(tp, fp, fn);

  CorpusMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  for (const PageEval& p : pages) {
    const CorpusMetrics page = metrics_from_counts(p.tp, p.fp, p.fn);
    m.precision += page.precision;
    m.recall += page.recall;
  }
  m.precision /= static_cast<double>(pages.size());
  m.recall /= static_cast<double>(pages.size());
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

namespace {

MeanStd mean_std(const std::vector<double>& xs, StdConvention convention) {
  // Shifted by the first value so identical inputs give exactly zero spread.
  const double n = static_cast<double>(xs.size());
  const double shift = xs.front();
  double sum = 0.0;
  for (double x : xs) sum += x - shift;
  const double mean_d = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - shift - mean_d) * (x - shift - mean_d);
  const double denom = convention == StdConvention::sample ? n - 1.0 : n;
  return {shift + mean_d, std::sqrt(ss / denom)};
}

}  // namespace

FoldStatistics fold_statistics(const std::vector<CorpusMetrics>& per_fold,
                               StdConvention convention) {
  if (per_fold.size() < 2) throw PreconditionError("fold statistics need at least two folds");
  std::vector<double> p, r, f;
  for (const CorpusMetrics& m : per_fold) {
    p.push_back(m.precision);
    r.push_back(m.recall);
    f.push_back(m.f1);
  }
  return {mean_std(p, convention), mean_std(r, convention), mean_std(f, convention)};
}

std::vector<PageEval> evaluate_corpus(const AnnotationMap& ground_truth,
                                      const PredictionSet& predictions, const MatchConfig& cfg) {
  static const std::vector<Prediction> kNone;
  std::vector<PageEval> pages;
  pages.reserve(ground_truth.size());
  for (const auto& [page, boxes] : ground_truth) {
    const auto it = predictions.find(page);
    pages.push_back(match_page(boxes, it == predictions.end() ? kNone : it->second, cfg, page));
  }
  return pages;
}

}  // namespace scanfig
