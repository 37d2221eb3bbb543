// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run all ten
//   acceptance 3 7        run the named criteria
//
// Exit status is 0 only when every selected criterion passes.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "scanfig/augment.hpp"
#include "scanfig/cli.hpp"
#include "scanfig/dataset.hpp"
#include "scanfig/evaluator.hpp"
#include "scanfig/geometry.hpp"
#include "scanfig/image_io.hpp"
#include "scanfig/induce.hpp"
#include "scanfig/raster.hpp"

using namespace scanfig;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SCANFIG_FIXTURES;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1: F1 arithmetic -------------------------------------------------------

struct Row {
  const char* table;
  const char* label;
  double p, r, f1;
};

// Published (precision, recall, F1) triples.
const std::vector<Row> kPublishedRows = {
    {"baseline test split", "Testing", 0.439, 0.445, 0.442},
    {"cross-validation", "baseline", 0.450, 0.468, 0.459},
    {"cross-validation", "K=0", 0.749, 0.869, 0.804},
    {"cross-validation", "K=1", 0.870, 0.821, 0.845},
    {"cross-validation", "K=2", 0.75, 0.691, 0.720},
    {"cross-validation", "K=3", 0.928, 0.972, 0.949},
    {"cross-validation", "K=4", 0.886, 0.937, 0.911},
    {"cross-validation", "K=5", 0.887, 0.935, 0.910},
    {"cross-validation", "K=6", 0.804, 0.889, 0.844},
    {"cross-validation", "K=7", 0.859, 0.932, 0.894},
    {"cross-validation", "Mean", 0.842, 0.881, 0.860},
    {"detector comparison", "Newspaper Navigator", 0.328, 0.311, 0.320},
    {"detector comparison", "Azure Custom Vision", 0.468, 0.564, 0.511},
    {"detector comparison", "Google AutoML", 0.908, 0.878, 0.893},
};

// Whether some precision/recall inside the 3-decimal rounding interval of
// the published values gives the published F1 after rounding.
bool consistent_with_rounding(const Row& row) {
  for (int i = -50; i <= 50; ++i) {
    for (int j = -50; j <= 50; ++j) {
      const double f = f1_score(row.p + i * 1e-5, row.r + j * 1e-5);
      if (std::abs(f - row.f1) <= 0.0005) return true;
    }
  }
  return false;
}

Outcome criterion_1() {
  Outcome o;
  for (const Row& row : kPublishedRows) {
    const double f = f1_score(row.p, row.r);
    const double err = std::abs(f - row.f1);
    if (err > 0.0005) {
      o.require(false, std::string(row.table) + " / " + row.label +
                           fmt(": P=%.3f R=%.3f gives F1=%.5f, table %.3f", row.p, row.r, f, row.f1) +
                           (consistent_with_rounding(row) ? " (reachable within input rounding)"
                                                          : " (not reachable within input rounding)"));
    }
  }
  return o;
}

// ---- 2: fold statistics -----------------------------------------------------

Outcome criterion_2() {
  Outcome o;
  std::vector<CorpusMetrics> folds;
  for (const Row& row : kPublishedRows) {
    if (std::string(row.table) != "cross-validation" || row.label[0] != 'K') continue;
    CorpusMetrics m;
    m.precision = row.p;
    m.recall = row.r;
    m.f1 = row.f1;
    folds.push_back(m);
  }
  o.require(folds.size() == 8, "expected 8 folds");
  const double mean_p = 0.842, mean_r = 0.881, mean_f = 0.860;
  const double sd_p = 0.066, sd_r = 0.090, sd_f = 0.073;

  bool any_convention = false;
  for (StdConvention conv : {StdConvention::sample, StdConvention::population}) {
    const FoldStatistics s = fold_statistics(folds, conv);
    const bool means = std::abs(s.precision.mean - mean_p) <= 0.001 &&
                       std::abs(s.recall.mean - mean_r) <= 0.001 && std::abs(s.f1.mean - mean_f) <= 0.001;
    const bool sds = std::abs(s.precision.stddev - sd_p) <= 0.005 &&
                     std::abs(s.recall.stddev - sd_r) <= 0.005 && std::abs(s.f1.stddev - sd_f) <= 0.005;
    const char* name = conv == StdConvention::sample ? "sample" : "population";
    o.note(std::string(name) + fmt(": mean %.4f/%.4f/%.4f", s.precision.mean, s.recall.mean, s.f1.mean) +
           fmt(" std %.4f/%.4f/%.4f", s.precision.stddev, s.recall.stddev, s.f1.stddev) +
           (means && sds ? " matches" : " outside tolerance"));
    o.require(means, std::string(name) + ": means outside +-0.001");
    any_convention = any_convention || (means && sds);
  }
  if (any_convention) {
    // Only the means are required under both conventions; the std needs one.
    std::vector<std::string> keep;
    for (const auto& n : o.notes)
      if (n.find("means outside") != std::string::npos) keep.push_back(n);
    o.pass = keep.empty();
  } else {
    o.require(false, "no std convention matches within +-0.005");
  }
  return o;
}

// ---- 3: Hungarian vs brute force ----------------------------------------------

Outcome criterion_3() {
  Outcome o;
  std::mt19937_64 gen(20210301);
  std::uniform_int_distribution<int> dim(1, 6), val(0, 1000);
  int trials = 0;
  for (; trials < 600; ++trials) {
    const std::size_t r = dim(gen), c = dim(gen);
    CostMatrix m(r, c);
    // Integer-valued costs keep every sum exact, so equality is meaningful.
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = trials % 4 == 0 ? val(gen) % 5 : val(gen);

    const auto pairs = hungarian_assign(m);
    double got = 0;
    std::set<std::size_t> rows, cols;
    for (const auto& [i, j] : pairs) {
      got += m(i, j);
      rows.insert(i);
      cols.insert(j);
    }
    const bool valid = pairs.size() == std::min(r, c) && rows.size() == pairs.size() && cols.size() == pairs.size();

    const bool wide = r <= c;
    std::vector<std::size_t> perm(wide ? c : r);
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
      double s = 0;
      for (std::size_t i = 0; i < std::min(r, c); ++i) s += wide ? m(i, perm[i]) : m(perm[i], i);
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (!valid || got != best) {
      o.require(false, "trial " + std::to_string(trials) + fmt(": %gx%g got %g, brute force %g", r, c, got, best));
      if (o.notes.size() > 5) break;
    }
  }
  o.note(std::to_string(trials) + " matrices");
  return o;
}

// ---- 4: IOU vs unit cells -----------------------------------------------------

Outcome criterion_4() {
  Outcome o;
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> coord(0, 100);
  double worst = 0;
  const int trials = 1500;
  for (int t = 0; t < trials; ++t) {
    int v[8];
    for (int& x : v) x = coord(gen);
    const int ax1 = std::min(v[0], v[1]), ax2 = std::max(v[0], v[1]);
    const int ay1 = std::min(v[2], v[3]), ay2 = std::max(v[2], v[3]);
    // Every third pair overlaps by construction.
    int bx1 = std::min(v[4], v[5]), bx2 = std::max(v[4], v[5]);
    int by1 = std::min(v[6], v[7]), by2 = std::max(v[6], v[7]);
    if (t % 3 == 0) {
      bx1 = std::min(bx1, ax2);
      by1 = std::min(by1, ay2);
    }
    long inter = 0, uni = 0;
    for (int y = 0; y < 100; ++y)
      for (int x = 0; x < 100; ++x) {
        const bool a = x >= ax1 && x < ax2 && y >= ay1 && y < ay2;
        const bool b = x >= bx1 && x < bx2 && y >= by1 && y < by2;
        inter += a && b;
        uni += a || b;
      }
    const double oracle = uni == 0 ? 0.0 : double(inter) / double(uni);
    const double got = iou({double(ax1), double(ay1), double(ax2), double(ay2)},
                           {double(bx1), double(by1), double(bx2), double(by2)});
    worst = std::max(worst, std::abs(got - oracle));
  }
  o.require(worst <= 1e-12, fmt("max deviation %.3g", worst));
  o.note(std::to_string(trials) + fmt(" pairs, max deviation %.3g", worst));
  return o;
}

// ---- 5: matching protocol -----------------------------------------------------

Outcome criterion_5() {
  Outcome o;
  const MatchConfig cfg;
  const std::vector<BoundingBox> gt{{0, 0, 10, 10}};
  auto expect = [&](const PageEval& e, std::size_t tp, std::size_t fp, std::size_t fn, const char* what) {
    o.require(e.tp == tp && e.fp == fp && e.fn == fn,
              std::string(what) + fmt(": got tp=%g fp=%g fn=%g", e.tp, e.fp, e.fn));
  };
  expect(match_page(gt, {{{0, 0, 10, 10}, 0.9}}, cfg), 1, 0, 0, "perfect match");
  expect(match_page(gt, {{{0, 0, 10, 10}, 0.4}}, cfg), 0, 0, 1, "sub-threshold confidence");
  const PageEval low = match_page(gt, {{{5, 5, 15, 15}, 0.9}}, cfg);
  expect(low, 0, 1, 1, "IOU 0.1429 mismatch");
  o.require(low.matches.size() == 1 && std::abs(low.matches[0].iou - 0.142857) < 1e-6, "mismatch IOU");

  std::mt19937_64 gen(55);
  std::uniform_int_distribution<int> count(0, 10);
  std::uniform_real_distribution<double> pos(0, 800), size(10, 300), conf(0, 1), jitter(-15, 15);
  int violations = 0;
  for (int page = 0; page < 200; ++page) {
    std::vector<BoundingBox> g;
    std::vector<Prediction> p;
    const int ng = count(gen), np = count(gen);
    for (int i = 0; i < ng; ++i) {
      const double x = pos(gen), y = pos(gen);
      g.emplace_back(x, y, x + size(gen), y + size(gen));
    }
    for (int i = 0; i < np; ++i) {
      if (i < ng && i % 2 == 0) {
        const BoundingBox& b = g[i];
        const double dx = jitter(gen), dy = jitter(gen);
        p.push_back({{b.x1() + dx, b.y1() + dy, b.x2() + dx, b.y2() + dy}, conf(gen)});
      } else {
        const double x = pos(gen), y = pos(gen);
        p.push_back({{x, y, x + size(gen), y + size(gen)}, conf(gen)});
      }
    }
    const PageEval base = match_page(g, p, cfg);
    std::multiset<std::pair<double, double>> base_pairs;
    for (const Match& m : base.matches) base_pairs.insert({m.iou, m.center_distance});
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      auto g2 = g;
      auto p2 = p;
      std::shuffle(g2.begin(), g2.end(), gen);
      std::shuffle(p2.begin(), p2.end(), gen);
      const PageEval e = match_page(g2, p2, cfg);
      std::multiset<std::pair<double, double>> pairs;
      for (const Match& m : e.matches) pairs.insert({m.iou, m.center_distance});
      if (e.tp != base.tp || e.fp != base.fp || e.fn != base.fn || pairs != base_pairs) ++violations;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " permutation mismatches");
  o.note("200 random pages x 5 permutations");
  return o;
}

// ---- 6: augmentation geometry -------------------------------------------------

BoundingBox dark_envelope(const PageImage& img) {
  int x1 = img.width(), y1 = img.height(), x2 = -1, y2 = -1;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (img.at(x, y) < 128) {
        x1 = std::min(x1, x);
        y1 = std::min(y1, y);
        x2 = std::max(x2, x);
        y2 = std::max(y2, y);
      }
  if (x2 < 0) return {};
  return {double(x1), double(y1), double(x2 + 1), double(y2 + 1)};
}

Outcome criterion_6() {
  Outcome o;
  std::mt19937_64 gen(6);
  std::uniform_int_distribution<int> w(200, 500), h(250, 650);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 1.0;
  int checked = 0;
  for (int page = 0; page < 100; ++page) {
    const int pw = w(gen), ph = h(gen);
    // Integer-aligned rectangle well inside the frame.
    const int bw = static_cast<int>(pw * (0.2 + 0.5 * u(gen)));
    const int bh = static_cast<int>(ph * (0.2 + 0.5 * u(gen)));
    const int bx = static_cast<int>((pw - bw) * (0.1 + 0.8 * u(gen)));
    const int by = static_cast<int>((ph - bh) * (0.1 + 0.8 * u(gen)));
    const BoundingBox box(bx, by, bx + bw, by + bh);
    AnnotatedPage src{"p" + std::to_string(page), PageImage(pw, ph, 1), {box}};
    src.image.fill_rect(box, 0);

    for (Transform t : {Transform::affine_rotation, Transform::perspective}) {
      AugmentationConfig cfg = AugmentationConfig::none();
      cfg.set_enabled(t, true);
      cfg.rotation_range = 1.0;
      cfg.perspective_jitter = 0.05;
      cfg.seed = RandomSeed{static_cast<std::uint64_t>(page * 2 + 1)};
      const AnnotatedPage out = apply_pipeline(src, cfg);
      if (out.boxes.size() != 1) {
        o.require(false, "page " + std::to_string(page) + ": box dropped");
        continue;
      }
      const double overlap = iou(dark_envelope(out.image), out.boxes[0]);
      worst = std::min(worst, overlap);
      ++checked;
      if (overlap < 0.95) {
        o.require(false, "page " + std::to_string(page) + " " + std::string(transform_name(t)) +
                             fmt(": IOU %.4f", overlap));
      }
    }
  }
  o.note(std::to_string(checked) + fmt(" transformed pages, min IOU %.4f", worst));
  return o;
}

// ---- 7: determinism -----------------------------------------------------------

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("scanfig-accept-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Outcome criterion_7() {
  Outcome o;
  TempDir tmp("determinism");
  const fs::path in = tmp.path / "in";
  fs::create_directories(in);
  AnnotationMap ann;
  std::mt19937 gen(7);
  std::uniform_int_distribution<int> shade(0, 255);
  for (int i = 0; i < 4; ++i) {
    PageImage img(160, 210, i % 2 ? 3 : 1);
    for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(200 + shade(gen) % 56);
    img.fill_rect({20.0 + i, 30, 120, 110}, 10);
    const std::string name = "scan_" + std::to_string(i) + ".png";
    write_png(in / name, img);
    ann[name] = {{20.0 + i, 30, 120, 110}, {10.5, 150.25, 140, 200}};
  }
  std::ofstream(in / "annotations.json") << emit_via(ann);

  std::ostringstream log;
  cli::AugmentOptions opts;
  opts.input_dir = in;
  opts.seed = 1234;
  opts.output_dir = tmp.path / "a";
  const int a = cli::run_augment(opts, log);
  opts.output_dir = tmp.path / "b";
  opts.jobs = 3;
  const int b = cli::run_augment(opts, log);
  o.require(a == 0 && b == 0, "augment exit codes " + std::to_string(a) + ", " + std::to_string(b));

  o.require(slurp(tmp.path / "a/annotations.json") == slurp(tmp.path / "b/annotations.json"),
            "annotations differ");
  o.require(!slurp(tmp.path / "a/annotations.json").empty(), "no annotations written");
  for (int i = 0; i < 4; ++i) {
    const std::string name = "scan_" + std::to_string(i) + ".png";
    o.require(read_png(tmp.path / "a" / name) == read_png(tmp.path / "b" / name), name + " pixels differ");
    const std::string meta = "scan_" + std::to_string(i) + ".meta.json";
    o.require(slurp(tmp.path / "a" / meta) == slurp(tmp.path / "b" / meta), meta + " differs");
  }
  o.note("4 pages, serial vs 3 jobs");
  return o;
}

// ---- 8: induction round trip --------------------------------------------------

Outcome criterion_8() {
  Outcome o;
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> nfig(1, 3), shade(0, 120);
  std::uniform_real_distribution<double> u(0, 1);
  int pairs = 0, labels = 0;
  double worst = 0;
  for (int page = 0; page < 60; ++page) {
    const int W = 850, H = 1100;
    PageImage plain(W, H, page % 4 == 0 ? 3 : 1);
    // Running text in both renders.
    for (int y = 80; y < H - 80; y += 18)
      for (int x = 90; x < W - 90; ++x)
        for (int yy = y; yy < y + 8; ++yy)
          for (int c = 0; c < plain.channels(); ++c) plain.at(x, yy, c) = 40;

    // Figures stacked in separate horizontal bands so frames never touch.
    const int n = nfig(gen);
    const int band = (H - 160) / n;
    std::vector<BoundingBox> truth;
    for (int i = 0; i < n; ++i) {
      const int top = 80 + i * band;
      const int fh = static_cast<int>(band * (0.35 + 0.45 * u(gen)));
      const int fw = static_cast<int>((W - 200) * (0.3 + 0.65 * u(gen)));
      const int fx = 100 + static_cast<int>((W - 200 - fw) * u(gen));
      const int fy = top + 10 + static_cast<int>((band - fh - 20) * u(gen));
      truth.emplace_back(fx, fy, fx + fw, fy + fh);
      const std::uint8_t fill = static_cast<std::uint8_t>(150 + shade(gen) % 100);
      plain.fill_rect({double(fx - 12), double(fy - 12), double(fx + fw + 12), double(fy + fh + 12)}, 255);
      plain.fill_rect(truth.back(), fill);
    }
    PageImage marked = plain;
    for (const BoundingBox& b : truth) {
      const int x1 = int(b.x1()) - 2, y1 = int(b.y1()) - 2, x2 = int(b.x2()) + 2, y2 = int(b.y2()) + 2;
      for (int y = y1; y < y2; ++y)
        for (int x = x1; x < x2; ++x)
          if (x < x1 + 2 || x >= x2 - 2 || y < y1 + 2 || y >= y2 - 2)
            for (int c = 0; c < marked.channels(); ++c) marked.at(x, y, c) = 0;
    }

    RenderedDocument pd{"doc" + std::to_string(page), 100, {plain}};
    RenderedDocument md{pd.doc_id, 100, {marked}};
    const auto got = induce_labels(pd, md);
    ++pairs;
    std::sort(truth.begin(), truth.end(), [](const BoundingBox& a, const BoundingBox& b) {
      return std::make_pair(a.y1(), a.x1()) < std::make_pair(b.y1(), b.x1());
    });
    if (got.size() != 1 || got[0].size() != truth.size()) {
      o.require(false, "page " + std::to_string(page) + ": expected " + std::to_string(truth.size()) +
                           " labels, got " + std::to_string(got.empty() ? 0 : got[0].size()));
      continue;
    }
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const BoundingBox &g = got[0][i], &t = truth[i];
      const double d = std::max({std::abs(g.x1() - t.x1()), std::abs(g.y1() - t.y1()), std::abs(g.x2() - t.x2()),
                                 std::abs(g.y2() - t.y2())});
      worst = std::max(worst, d);
      ++labels;
      if (d > 1.0) o.require(false, "page " + std::to_string(page) + fmt(": edge off by %.1f px", d));
    }
    if (page % 10 == 0) {
      o.require(diff_pages(plain, plain).empty(), "identical pages produced a diff");
    }
  }
  o.note(std::to_string(pairs) + " page pairs, " + std::to_string(labels) + fmt(" labels, max edge error %.1f px", worst));
  return o;
}

// ---- 9: splits ------------------------------------------------------------------

Outcome criterion_9() {
  Outcome o;
  int cases = 0;
  for (int n = 2; n <= 64; ++n) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("d" + std::to_string(i % 7) + "_" + std::to_string(i));
    const RandomSeed seed{static_cast<std::uint64_t>(n) * 977};

    const HalfSplit h = split_half(ids, seed);
    std::set<std::string> cover(h.validation.begin(), h.validation.end());
    cover.insert(h.test.begin(), h.test.end());
    o.require(cover.size() == ids.size() && h.validation.size() + h.test.size() == ids.size(),
              "half split n=" + std::to_string(n) + " not a partition");
    o.require(h.validation.size() == static_cast<std::size_t>((n + 1) / 2), "half split sizes n=" + std::to_string(n));
    const HalfSplit h2 = split_half(ids, seed);
    o.require(h.validation == h2.validation && h.test == h2.test, "half split not deterministic");

    for (int k = 2; k <= std::min(8, n); ++k) {
      ++cases;
      const auto folds = k_fold(ids, k, seed);
      const auto again = k_fold(ids, k, seed);
      std::multiset<std::string> held;
      std::size_t lo = SIZE_MAX, hi = 0;
      bool ok = folds.size() == static_cast<std::size_t>(k);
      for (std::size_t f = 0; f < folds.size(); ++f) {
        held.insert(folds[f].held_out.begin(), folds[f].held_out.end());
        lo = std::min(lo, folds[f].held_out.size());
        hi = std::max(hi, folds[f].held_out.size());
        std::set<std::string> tr(folds[f].train.begin(), folds[f].train.end());
        for (const auto& id : folds[f].held_out) ok = ok && !tr.count(id);
        ok = ok && tr.size() + folds[f].held_out.size() == ids.size();
        ok = ok && folds[f].held_out == again[f].held_out && folds[f].train == again[f].train;
      }
      ok = ok && held.size() == ids.size() && std::set<std::string>(held.begin(), held.end()).size() == ids.size();
      ok = ok && hi - lo <= 1;
      if (!ok) o.require(false, "k-fold n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
  }
  std::vector<std::string> big;
  for (int i = 0; i < 10182; ++i) big.push_back("etd" + std::to_string(i / 50) + "_" + std::to_string(i % 50));
  const HalfSplit hb = split_half(big, RandomSeed{0});
  o.require(hb.validation.size() == 5091 && hb.test.size() == 5091,
            "10182 pages split " + std::to_string(hb.validation.size()) + "/" + std::to_string(hb.test.size()));
  o.note(std::to_string(cases) + " (n, k) cases; 10182 -> " + std::to_string(hb.validation.size()) + "/" +
         std::to_string(hb.test.size()));
  return o;
}

// ---- 10: VIA round trip -------------------------------------------------------

Outcome criterion_10() {
  Outcome o;
  int boxes = 0;
  for (const char* name : {"via/three_pages.json", "via/via1_fractional.json"}) {
    const AnnotationMap first = parse_via(slurp(kFixtures / name));
    const std::string emitted = emit_via(first);
    const AnnotationMap second = parse_via(emitted);
    bool same = first.size() == second.size();
    for (const auto& [page, list] : first) {
      const auto it = second.find(page);
      if (it == second.end() || it->second.size() != list.size()) {
        same = false;
        continue;
      }
      for (std::size_t i = 0; i < list.size(); ++i) {
        const BoundingBox &a = list[i], &b = it->second[i];
        same = same && a.x1() == b.x1() && a.y1() == b.y1() && a.x2() == b.x2() && a.y2() == b.y2();
        ++boxes;
      }
    }
    o.require(same, std::string(name) + ": parse(emit(x)) != x");
    o.require(emit_via(second) == emitted, std::string(name) + ": emit not stable");
  }
  o.note(std::to_string(boxes) + " boxes compared bit for bit");
  return o;
}

struct Criterion {
  const char* title;
  double limit_s;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, Criterion> criteria = {
      {1, {"F1 arithmetic reproduces the published F1 values (+-0.0005)", 1, criterion_1}},
      {2, {"fold means (+-0.001) and standard deviations (+-0.005)", 1, criterion_2}},
      {3, {"Hungarian assignment equals brute-force minimum", 10, criterion_3}},
      {4, {"IOU equals unit-cell counting (1e-12)", 5, criterion_4}},
      {5, {"matching protocol examples and permutation invariance", 5, criterion_5}},
      {6, {"geometric augmentation keeps boxes on the pixels (IOU >= 0.95)", 60, criterion_6}},
      {7, {"augment is deterministic for a fixed seed", 0, criterion_7}},
      {8, {"induced labels match constructed frames (+-1 px)", 30, criterion_8}},
      {9, {"split and fold partition properties", 5, criterion_9}},
      {10, {"VIA parse/emit round trip", 1, criterion_10}},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (!criteria.count(n)) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty())
    for (const auto& [n, _] : criteria) selected.push_back(n);

  int failures = 0;
  for (int n : selected) {
    const Criterion& c = criteria.at(n);
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs > c.limit_s) out.require(false, fmt("runtime %.2f s over the %.0f s limit", secs, c.limit_s));
    std::printf("%s criterion %d: %s (%.3f s)\n", out.pass ? "PASS" : "FAIL", n, c.title, secs);
    for (const std::string& note : out.notes) std::printf("    %s\n", note.c_str());
    failures += !out.pass;
  }
  return failures == 0 ? 0 : 1;
}
