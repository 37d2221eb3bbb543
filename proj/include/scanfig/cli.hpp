#pragma once

// Batch commands behind the `scanfig` executable. Each returns a process
// exit code and writes exactly one run manifest (JSON) describing the run.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace scanfig::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Stable exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kBadInput = 2,        // unreadable input, schema violation, bad flag value
  kPartialFailure = 3,  // some pages/documents failed; listed in the manifest
  kRendererMissing = 4,
};

struct AugmentOptions {
  std::filesystem::path input_dir;   // *.png pages, optional annotations.json, *.tex sources
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

struct InduceOptions {
  std::filesystem::path sources_dir;  // <doc>.tex or <doc>/{plain,marked}/*.png
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> config;
  int dpi = 100;
  unsigned jobs = 1;
};

struct SplitOptions {
  std::filesystem::path manifest;
  std::filesystem::path output_dir;
  std::string kind = "half";  // "half" or "kfold"
  int k = 8;
  std::uint64_t seed = 0;
};

struct EvaluateOptions {
  std::filesystem::path annotations;  // VIA project or ScanBank manifest
  std::filesystem::path predictions;
  std::filesystem::path report;
  std::optional<std::filesystem::path> config;
  std::optional<double> confidence_threshold;
  std::optional<double> iou_threshold;
  bool macro = false;
};

struct AblateOptions {
  std::filesystem::path base_config;
  std::filesystem::path output_dir;
  std::optional<std::uint64_t> seed;
};

struct ReportOptions {
  std::vector<std::filesystem::path> reports;  // evaluation reports, one per fold
  std::filesystem::path output;
  bool population_std = false;
};

int run_augment(const AugmentOptions& opts, std::ostream& log);
int run_induce(const InduceOptions& opts, std::ostream& log);
int run_split(const SplitOptions& opts, std::ostream& log);
int run_evaluate(const EvaluateOptions& opts, std::ostream& log);
int run_ablate(const AblateOptions& opts, std::ostream& log);
int run_report(const ReportOptions& opts, std::ostream& out, std::ostream& log);

}  // namespace scanfig::cli
