#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "scanfig/augment.hpp"
#include "scanfig/cli.hpp"
#include "scanfig/dataset.hpp"
#include "scanfig/error.hpp"
#include "scanfig/evaluator.hpp"
#include "scanfig/image_io.hpp"
#include "scanfig/induce.hpp"
#include "scanfig/kernels.hpp"

namespace scanfig::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// ---- small utilities --------------------------------------------------------

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw IoError("cannot write " + p.string());
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. fn must not throw.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

// `key = value` lines with '#' comments.
std::map<std::string, std::string> parse_kv(std::string_view text, const std::string& what) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(what + " line " + std::to_string(line_no) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  double v = 0;
  const auto& s = it->second;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("config: '" + key + "' needs a number");
  }
  return v;
}

// One manifest per run; timestamps live only here.
class RunManifest {
 public:
  explicit RunManifest(std::string command) : start_(std::chrono::system_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["tool_version"] = kToolVersion;
    doc_["generator"] = kGeneratorName;
    doc_["kernel_isa"] = std::string(kernels::isa_name(kernels::active_isa()));
    doc_["started_at"] = utc_timestamp(start_);
  }
  ordered_json& operator[](const char* key) { return doc_[key]; }

  void failure(std::string what) { failures_.push_back(std::move(what)); }
  bool has_failures() const { return !failures_.empty(); }

  void write(const fs::path& path, int exit_code) {
    const auto end = std::chrono::system_clock::now();
    doc_["failures"] = failures_;
    doc_["exit_code"] = exit_code;
    doc_["finished_at"] = utc_timestamp(end);
    doc_["wall_time_s"] = std::chrono::duration<double>(end - start_).count();
    write_text(path, doc_.dump(2) + "\n");
  }

 private:
  std::chrono::system_clock::time_point start_;
  ordered_json doc_;
  std::vector<std::string> failures_;
};

std::vector<fs::path> files_with_extension(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

long trailing_number(const fs::path& p) {
  const std::string stem = p.stem().string();
  std::size_t i = stem.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(stem[i - 1]))) --i;
  return i == stem.size() ? -1 : std::stol(stem.substr(i));
}

ordered_json metrics_json(const CorpusMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
          {"tp", m.tp},               {"fp", m.fp},         {"fn", m.fn}};
}

// Reports a caught exception and returns the matching exit code.
int fail(std::ostream& log, const std::exception& e, int code) {
  log << "error: " << e.what() << "\n";
  return code;
}

}  // namespace

// ---- augment ----------------------------------------------------------------

int run_augment(const AugmentOptions& opts, std::ostream& log) {
  RunManifest manifest("augment");
  AugmentationConfig cfg;
  AnnotationMap input_boxes;
  std::vector<fs::path> pages, sources;
  try {
    if (!fs::is_directory(opts.input_dir)) {
      throw IoError("input directory not found: " + opts.input_dir.string());
    }
    if (opts.config) cfg = AugmentationConfig::parse(read_text(*opts.config), cfg);
    if (opts.seed) cfg.seed = RandomSeed{*opts.seed};
    cfg.validate();
    const fs::path ann = opts.input_dir / "annotations.json";
    if (fs::exists(ann)) input_boxes = parse_via(read_text(ann));
    pages = files_with_extension(opts.input_dir, ".png");
    sources = files_with_extension(opts.input_dir, ".tex");
    fs::create_directories(opts.output_dir);
  } catch (const Error& e) {
    return fail(log, e, kBadInput);
  } catch (const fs::filesystem_error& e) {
    return fail(log, e, kBadInput);
  }

  struct Outcome {
    std::string error;
    std::vector<BoundingBox> boxes;
  };
  std::vector<Outcome> outcomes(pages.size());
  parallel_for(pages.size(), opts.jobs, [&](std::size_t i) {
    const fs::path& path = pages[i];
    const std::string page_id = path.filename().string();
    try {
      AnnotatedPage page{page_id, read_png(path), {}};
      if (const auto it = input_boxes.find(page_id); it != input_boxes.end()) page.boxes = it->second;
      AugmentationConfig page_cfg = cfg;
      page_cfg.seed = page_seed(cfg.seed, i);
      PipelineResult result = apply_pipeline_logged(page, page_cfg);
      write_png(opts.output_dir / page_id, result.page.image);

      ordered_json meta;
      meta["page_id"] = page_id;
      meta["page_index"] = i;
      meta["seed"] = page_cfg.seed.value;
      meta["generator"] = kGeneratorName;
      ordered_json steps = ordered_json::array();
      for (const AppliedTransform& t : result.applied) {
        ordered_json params(t.params);
        steps.push_back({{"name", transform_name(t.kind)}, {"seed", t.seed.value}, {"params", params}});
      }
      meta["transforms"] = std::move(steps);
      write_text(opts.output_dir / (path.stem().string() + ".meta.json"), meta.dump(2) + "\n");
      outcomes[i].boxes = std::move(result.page.boxes);
    } catch (const std::exception& e) {
      outcomes[i].error = page_id + ": " + e.what();
    }
  });

  AnnotationMap output_boxes;
  std::size_t ok = 0;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const std::string page_id = pages[i].filename().string();
    seen.insert(page_id);
    if (!outcomes[i].error.empty()) {
      manifest.failure(outcomes[i].error);
      continue;
    }
    ++ok;
    output_boxes[page_id] = std::move(outcomes[i].boxes);
  }
  ordered_json warnings = ordered_json::array();
  for (const auto& [page_id, boxes] : input_boxes) {
    if (seen.contains(page_id)) continue;
    warnings.push_back("annotated page '" + page_id + "' has no image; carried over unchanged");
    output_boxes[page_id] = boxes;
  }

  std::size_t sources_ok = 0;
  for (const fs::path& src : sources) {
    try {
      write_text(opts.output_dir / src.filename(), transform_latex_source(read_text(src), cfg));
      ++sources_ok;
    } catch (const std::exception& e) {
      manifest.failure(src.filename().string() + ": " + e.what());
    }
  }

  try {
    if (!pages.empty() || !input_boxes.empty()) {
      write_text(opts.output_dir / "annotations.json", emit_via(output_boxes));
    }
  } catch (const Error& e) {
    return fail(log, e, kInternalError);
  }

  manifest["input"] = opts.input_dir.string();
  manifest["output"] = opts.output_dir.string();
  manifest["config"] = cfg.to_text();
  manifest["seed"] = cfg.seed.value;
  manifest["jobs"] = opts.jobs;
  ordered_json order = ordered_json::array();
  for (Transform t : kImageTransformOrder) order.push_back(transform_name(t));
  manifest["transform_order"] = std::move(order);
  manifest["counts"] = {{"pages_total", pages.size()},
                        {"pages_processed", ok},
                        {"pages_failed", pages.size() - ok},
                        {"sources_total", sources.size()},
                        {"sources_processed", sources_ok}};
  manifest["warnings"] = std::move(warnings);
  const int code = manifest.has_failures() ? kPartialFailure : kOk;
  manifest.write(opts.output_dir / "manifest.json", code);
  return code;
}

// ---- induce -----------------------------------------------------------------

int run_induce(const InduceOptions& opts, std::ostream& log) {
  RunManifest manifest("induce");
  InductionOptions iopts;
  RendererConfig rcfg;
  struct Doc {
    std::string id;
    fs::path tex;  // empty for pre-rendered pairs
    fs::path dir;
  };
  std::vector<Doc> docs;
  try {
    if (!fs::is_directory(opts.sources_dir)) {
      throw IoError("sources directory not found: " + opts.sources_dir.string());
    }
    if (opts.dpi <= 0) throw ParameterError("--dpi must be positive");
    iopts.stroke_px = kFrameRulePt * opts.dpi / 72.0;
    if (opts.config) {
      const auto kv = parse_kv(read_text(*opts.config), "induce config");
      static const std::set<std::string> known = {"threshold",     "min_region_px",  "stroke_px",
                                                  "merge_overlap", "render_command", "max_concurrent"};
      for (const auto& [k, _] : kv) {
        if (!known.contains(k)) throw ParseError("induce config: unknown key '" + k + "'");
      }
      const double thr = kv_double(kv, "threshold", iopts.diff.threshold);
      if (thr < 0 || thr > 255) throw ParseError("induce config: threshold must be in [0,255]");
      iopts.diff.threshold = static_cast<std::uint8_t>(thr);
      iopts.diff.min_region_px = static_cast<std::size_t>(
          std::max(0.0, kv_double(kv, "min_region_px", static_cast<double>(iopts.diff.min_region_px))));
      iopts.stroke_px = kv_double(kv, "stroke_px", iopts.stroke_px);
      iopts.merge_overlap = kv_double(kv, "merge_overlap", iopts.merge_overlap);
      if (const auto it = kv.find("render_command"); it != kv.end()) rcfg.command_template = it->second;
      rcfg.max_concurrent = static_cast<std::size_t>(
          std::max(1.0, kv_double(kv, "max_concurrent", static_cast<double>(rcfg.max_concurrent))));
    }
    rcfg = RendererConfig::from_environment(rcfg);
    for (const auto& entry : fs::directory_iterator(opts.sources_dir)) {
      const fs::path& p = entry.path();
      if (entry.is_regular_file() && p.extension() == ".tex") {
        docs.push_back({p.stem().string(), p, {}});
      } else if (entry.is_directory() && fs::is_directory(p / "plain") &&
                 fs::is_directory(p / "marked")) {
        docs.push_back({p.filename().string(), {}, p});
      }
    }
    std::sort(docs.begin(), docs.end(), [](const Doc& a, const Doc& b) { return a.id < b.id; });
    fs::create_directories(opts.output_dir);
  } catch (const Error& e) {
    return fail(log, e, kBadInput);
  } catch (const fs::filesystem_error& e) {
    return fail(log, e, kBadInput);
  }

  enum class Status { ok, skipped, failed, renderer_missing };
  struct Outcome {
    Status status = Status::failed;
    std::string message;
    std::vector<std::vector<BoundingBox>> labels;
  };
  auto load_pages = [](const fs::path& dir, int dpi) {
    std::vector<fs::path> files = files_with_extension(dir, ".png");
    std::stable_sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
      return trailing_number(a) < trailing_number(b);
    });
    RenderedDocument doc{dir.parent_path().filename().string(), dpi, {}};
    for (const fs::path& f : files) doc.pages.push_back(read_png(f));
    if (doc.pages.empty()) throw IoError("no page images in " + dir.string());
    return doc;
  };

  std::vector<Outcome> outcomes(docs.size());
  std::atomic<bool> renderer_missing{false};
  parallel_for(docs.size(), opts.jobs, [&](std::size_t i) {
    const Doc& d = docs[i];
    Outcome& out = outcomes[i];
    if (renderer_missing) {
      out = {Status::renderer_missing, "not attempted: renderer missing", {}};
      return;
    }
    try {
      RenderedDocument plain, marked;
      if (!d.tex.empty()) {
        const std::string source = read_text(d.tex);
        const std::string framed = inject_box_markup(source);
        plain = render(source, opts.dpi, rcfg, d.id);
        marked = render(framed, opts.dpi, rcfg, d.id);
      } else {
        plain = load_pages(d.dir / "plain", opts.dpi);
        marked = load_pages(d.dir / "marked", opts.dpi);
      }
      out.labels = induce_labels(plain, marked, iopts);
      out.status = Status::ok;
    } catch (const RendererMissingError& e) {
      renderer_missing = true;
      out = {Status::renderer_missing, e.what() + std::string(": ") + e.diagnostic(), {}};
    } catch (const InductionAbortError& e) {
      out = {Status::skipped, e.what(), {}};
    } catch (const RendererError& e) {
      out = {Status::failed, e.what() + std::string("\n") + e.diagnostic(), {}};
    } catch (const std::exception& e) {
      out = {Status::failed, e.what(), {}};
    }
  });

  AnnotationMap labels;
  ordered_json per_doc = ordered_json::array();
  std::size_t ok = 0, skipped = 0, failed = 0, pages = 0, boxes = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const Outcome& o = outcomes[i];
    const char* status = "failed";
    switch (o.status) {
      case Status::ok:
        status = "ok";
        ++ok;
        for (std::size_t p = 0; p < o.labels.size(); ++p) {
          labels[make_page_id(docs[i].id, static_cast<int>(p))] = o.labels[p];
          boxes += o.labels[p].size();
        }
        pages += o.labels.size();
        break;
      case Status::skipped:
        status = "skipped";
        ++skipped;
        break;
      case Status::failed:
      case Status::renderer_missing:
        ++failed;
        manifest.failure(docs[i].id + ": " + o.message);
        break;
    }
    ordered_json row = {{"doc_id", docs[i].id}, {"status", status}};
    if (o.status != Status::ok) row["message"] = o.message;
    else row["pages"] = o.labels.size();
    per_doc.push_back(std::move(row));
  }

  ordered_json report;
  report["documents_total"] = docs.size();
  report["succeeded"] = ok;
  report["skipped"] = skipped;
  report["failed"] = failed;
  report["pages_labeled"] = pages;
  report["labels"] = boxes;
  report["documents"] = per_doc;
  try {
    write_text(opts.output_dir / "annotations.json", emit_via(labels));
    write_text(opts.output_dir / "report.json", report.dump(2) + "\n");
  } catch (const Error& e) {
    return fail(log, e, kInternalError);
  }

  manifest["input"] = opts.sources_dir.string();
  manifest["output"] = opts.output_dir.string();
  manifest["dpi"] = opts.dpi;
  manifest["jobs"] = opts.jobs;
  manifest["config"] = {{"threshold", iopts.diff.threshold},
                        {"min_region_px", iopts.diff.min_region_px},
                        {"stroke_px", iopts.stroke_px},
                        {"merge_overlap", iopts.merge_overlap},
                        {"render_command", rcfg.command_template},
                        {"max_concurrent", rcfg.max_concurrent}};
  manifest["counts"] = {{"documents_total", docs.size()}, {"succeeded", ok},
                        {"skipped", skipped},             {"failed", failed},
                        {"pages_labeled", pages},         {"labels", boxes}};
  int code = kOk;
  if (renderer_missing) {
    log << "error: renderer not found; set render_command in the config or "
        << RendererConfig::kEnvOverride << "\n";
    code = kRendererMissing;
  } else if (manifest.has_failures()) {
    code = kPartialFailure;
  }
  manifest.write(opts.output_dir / "manifest.json", code);
  return code;
}

// ---- split ------------------------------------------------------------------

int run_split(const SplitOptions& opts, std::ostream& log) {
  RunManifest manifest("split");
  try {
    if (opts.kind != "half" && opts.kind != "kfold") {
      throw ParameterError("--kind must be 'half' or 'kfold'");
    }
    const ScanBankManifest data = ScanBankManifest::parse(read_text(opts.manifest));
    const std::vector<std::string> ids = data.page_ids();
    fs::create_directories(opts.output_dir);
    auto write_list = [&](const std::string& name, const std::vector<std::string>& list) {
      std::string text;
      for (const std::string& id : list) text += id + "\n";
      write_text(opts.output_dir / name, text);
    };
    ordered_json sizes;
    if (opts.kind == "half") {
      const HalfSplit s = split_half(ids, RandomSeed{opts.seed});
      write_list("validation.txt", s.validation);
      write_list("test.txt", s.test);
      sizes = {{"validation", s.validation.size()}, {"test", s.test.size()}};
    } else {
      const auto folds = k_fold(ids, opts.k, RandomSeed{opts.seed});
      sizes = ordered_json::array();
      for (std::size_t f = 0; f < folds.size(); ++f) {
        write_list("fold_" + std::to_string(f) + "_train.txt", folds[f].train);
        write_list("fold_" + std::to_string(f) + "_held_out.txt", folds[f].held_out);
        sizes.push_back({{"train", folds[f].train.size()}, {"held_out", folds[f].held_out.size()}});
      }
      manifest["k"] = opts.k;
    }
    manifest["input"] = opts.manifest.string();
    manifest["output"] = opts.output_dir.string();
    manifest["kind"] = opts.kind;
    manifest["seed"] = opts.seed;
    manifest["counts"] = {{"pages", ids.size()}, {"documents", data.entries.size()}};
    manifest["sizes"] = std::move(sizes);
    manifest.write(opts.output_dir / "manifest.json", kOk);
    return kOk;
  } catch (const Error& e) {
    return fail(log, e, kBadInput);
  } catch (const fs::filesystem_error& e) {
    return fail(log, e, kBadInput);
  }
}

// ---- evaluate ---------------------------------------------------------------

int run_evaluate(const EvaluateOptions& opts, std::ostream& log) {
  RunManifest manifest("evaluate");
  MatchConfig cfg;
  AnnotationMap gt;
  PredictionFile preds;
  try {
    if (opts.config) {
      const auto kv = parse_kv(read_text(*opts.config), "evaluate config");
      for (const auto& [k, _] : kv) {
        if (k != "confidence_threshold" && k != "iou_threshold") {
          throw ParseError("evaluate config: unknown key '" + k + "'");
        }
      }
      cfg.confidence_threshold = kv_double(kv, "confidence_threshold", cfg.confidence_threshold);
      cfg.iou_threshold = kv_double(kv, "iou_threshold", cfg.iou_threshold);
    }
    if (opts.confidence_threshold) cfg.confidence_threshold = *opts.confidence_threshold;
    if (opts.iou_threshold) cfg.iou_threshold = *opts.iou_threshold;
    cfg.validate();

    const std::string gt_text = read_text(opts.annotations);
    const json probe = json::parse(gt_text, nullptr, false);
    if (probe.is_object() && probe.contains("documents")) {
      const ScanBankManifest m = ScanBankManifest::parse(gt_text);
      for (const std::string& id : m.page_ids()) gt[id];
      for (const auto& [id, boxes] : m.annotations) gt[id] = boxes;
    } else {
      gt = parse_via(gt_text);
    }
    std::set<std::string> known;
    for (const auto& [id, _] : gt) known.insert(id);
    preds = parse_predictions(read_text(opts.predictions), &known);
  } catch (const ValidationError& e) {
    return fail(log, e, kBadInput);
  } catch (const Error& e) {
    return fail(log, e, kBadInput);
  }

  for (const std::string& w : preds.warnings) log << "warning: " << w << "\n";
  const std::vector<PageEval> pages = evaluate_corpus(gt, preds.predictions, cfg);

  ordered_json report;
  report["config"] = {{"confidence_threshold", cfg.confidence_threshold},
                      {"iou_threshold", cfg.iou_threshold}};
  report["aggregation"] = opts.macro ? "macro" : "micro";
  ordered_json rows = ordered_json::array();
  for (const PageEval& p : pages) {
    const CorpusMetrics pm = metrics_from_counts(p.tp, p.fp, p.fn);
    ordered_json matches = ordered_json::array();
    for (const Match& m : p.matches) {
      matches.push_back({{"prediction", m.prediction},
                         {"ground_truth", m.ground_truth},
                         {"iou", m.iou},
                         {"center_distance", m.center_distance}});
    }
    rows.push_back({{"page_id", p.page_id},
                    {"tp", p.tp},
                    {"fp", p.fp},
                    {"fn", p.fn},
                    {"precision", pm.precision},
                    {"recall", pm.recall},
                    {"f1", pm.f1},
                    {"matches", std::move(matches)}});
  }
  if (pages.empty()) {
    report["corpus"] = nullptr;
  } else {
    report["corpus"] =
        metrics_json(aggregate(pages, opts.macro ? Aggregation::macro : Aggregation::micro));
  }
  report["pages"] = std::move(rows);
  report["warnings"] = preds.warnings;

  try {
    if (opts.report.has_parent_path()) fs::create_directories(opts.report.parent_path());
    write_text(opts.report, report.dump(2) + "\n");
  } catch (const std::exception& e) {
    return fail(log, e, kInternalError);
  }
  manifest["input"] = {{"annotations", opts.annotations.string()},
                       {"predictions", opts.predictions.string()}};
  manifest["output"] = opts.report.string();
  manifest["config"] = report["config"];
  manifest["counts"] = {{"pages", pages.size()}, {"warnings", preds.warnings.size()}};
  fs::path manifest_path = opts.report;
  manifest_path += ".manifest.json";
  int code = kOk;
  if (pages.empty()) {
    manifest.failure("no ground-truth pages to evaluate");
    code = kBadInput;
  }
  manifest.write(manifest_path, code);
  return code;
}

// ---- ablate -----------------------------------------------------------------

int run_ablate(const AblateOptions& opts, std::ostream& log) {
  RunManifest manifest("ablate");
  try {
    AugmentationConfig base = AugmentationConfig::parse(read_text(opts.base_config));
    if (opts.seed) base.seed = RandomSeed{*opts.seed};
    const auto configs = leave_one_out_configs(base);
    fs::create_directories(opts.output_dir);
    ordered_json files = ordered_json::array();
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const std::string name = "ablate_" + std::to_string(i) + "_no_" +
                               std::string(transform_name(kAllTransforms[i])) + ".cfg";
      write_text(opts.output_dir / name, configs[i].to_text());
      files.push_back(name);
    }
    manifest["input"] = opts.base_config.string();
    manifest["output"] = opts.output_dir.string();
    manifest["config"] = base.to_text();
    manifest["seed"] = base.seed.value;
    manifest["files"] = std::move(files);
    manifest["counts"] = {{"configs", configs.size()}};
    manifest.write(opts.output_dir / "manifest.json", kOk);
    return kOk;
  } catch (const Error& e) {
    return fail(log, e, kBadInput);
  } catch (const fs::filesystem_error& e) {
    return fail(log, e, kBadInput);
  }
}

// ---- report -----------------------------------------------------------------

int run_report(const ReportOptions& opts, std::ostream& out, std::ostream& log) {
  RunManifest manifest("report");
  std::vector<CorpusMetrics> folds;
  try {
    for (const fs::path& p : opts.reports) {
      const json r = json::parse(read_text(p), nullptr, false);
      if (r.is_discarded() || !r.is_object() || !r.contains("corpus") || !r["corpus"].is_object()) {
        throw ParseError(p.string() + ": not an evaluation report");
      }
      const json& c = r["corpus"];
      CorpusMetrics m;
      try {
        m.precision = c.at("precision").get<double>();
        m.recall = c.at("recall").get<double>();
        m.f1 = c.at("f1").get<double>();
        m.tp = c.value("tp", std::size_t{0});
        m.fp = c.value("fp", std::size_t{0});
        m.fn = c.value("fn", std::size_t{0});
      } catch (const json::exception& e) {
        throw ParseError(p.string() + ": " + e.what());
      }
      folds.push_back(m);
    }
    const StdConvention conv = opts.population_std ? StdConvention::population : StdConvention::sample;
    const FoldStatistics stats = fold_statistics(folds, conv);

    ordered_json doc;
    doc["std_convention"] = opts.population_std ? "population" : "sample";
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < folds.size(); ++i) {
      ordered_json row = metrics_json(folds[i]);
      row["source"] = opts.reports[i].string();
      rows.push_back(std::move(row));
    }
    doc["folds"] = std::move(rows);
    auto ms = [](const MeanStd& v) { return ordered_json{{"mean", v.mean}, {"stddev", v.stddev}}; };
    doc["precision"] = ms(stats.precision);
    doc["recall"] = ms(stats.recall);
    doc["f1"] = ms(stats.f1);
    if (opts.output.has_parent_path()) fs::create_directories(opts.output.parent_path());
    write_text(opts.output, doc.dump(2) + "\n");

    char line[128];
    out << "fold        precision  recall     f1\n";
    for (std::size_t i = 0; i < folds.size(); ++i) {
      std::snprintf(line, sizeof line, "%-10zu  %-9.3f  %-9.3f  %.3f\n", i, folds[i].precision,
                    folds[i].recall, folds[i].f1);
      out << line;
    }
    std::snprintf(line, sizeof line, "%-10s  %-9.3f  %-9.3f  %.3f\n", "mean", stats.precision.mean,
                  stats.recall.mean, stats.f1.mean);
    out << line;
    std::snprintf(line, sizeof line, "%-10s  %-9.3f  %-9.3f  %.3f\n", "std", stats.precision.stddev,
                  stats.recall.stddev, stats.f1.stddev);
    out << line;

    manifest["input"] = [&] {
      ordered_json in = ordered_json::array();
      for (const fs::path& p : opts.reports) in.push_back(p.string());
      return in;
    }();
    manifest["output"] = opts.output.string();
    manifest["counts"] = {{"folds", folds.size()}};
    fs::path manifest_path = opts.output;
    manifest_path += ".manifest.json";
    manifest.write(manifest_path, kOk);
    return kOk;
  } catch (const Error& e) {
    return fail(log, e, kBadInput);
  } catch (const fs::filesystem_error& e) {
    return fail(log, e, kBadInput);
  }
}

}  // namespace scanfig::cli
