#include <iostream>

#include "CLI11.hpp"
#include "scanfig/cli.hpp"

namespace cli = scanfig::cli;

int main(int argc, char** argv) {
  CLI::App app{"scanfig: figure-detection dataset tooling for scanned documents"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  cli::AugmentOptions aug;
  auto* augment = app.add_subcommand("augment", "Augment page images and co-transform their boxes");
  augment->add_option("input", aug.input_dir, "Directory of *.png pages, annotations.json, *.tex")
      ->required()->check(CLI::ExistingDirectory);
  augment->add_option("-o,--output", aug.output_dir, "Output directory")->required();
  augment->add_option("-c,--config", aug.config, "Augmentation config file");
  augment->add_option("--seed", aug.seed, "Seed (overrides the config)");
  augment->add_option("-j,--jobs", aug.jobs, "Parallel workers")->check(CLI::PositiveNumber);

  cli::InduceOptions ind;
  auto* induce = app.add_subcommand("induce", "Induce figure labels from LaTeX sources");
  induce->add_option("sources", ind.sources_dir, "Directory of <doc>.tex or <doc>/{plain,marked}/")
      ->required()->check(CLI::ExistingDirectory);
  induce->add_option("-o,--output", ind.output_dir, "Output directory")->required();
  induce->add_option("-c,--config", ind.config, "Induction config file");
  induce->add_option("--dpi", ind.dpi, "Render resolution")->check(CLI::PositiveNumber);
  induce->add_option("-j,--jobs", ind.jobs, "Parallel documents")->check(CLI::PositiveNumber);
  induce->footer(std::string("Environment: ") + "SCANFIG_RENDER_CMD overrides the renderer command.");

  cli::SplitOptions spl;
  auto* split = app.add_subcommand("split", "Split a dataset manifest by page");
  split->add_option("manifest", spl.manifest, "Dataset manifest JSON")->required()
      ->check(CLI::ExistingFile);
  split->add_option("-o,--output", spl.output_dir, "Output directory")->required();
  split->add_option("--kind", spl.kind, "half or kfold")->check(CLI::IsMember({"half", "kfold"}));
  split->add_option("-k", spl.k, "Number of folds for kfold");
  split->add_option("--seed", spl.seed, "Shuffle seed");

  cli::EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate->add_option("annotations", ev.annotations, "VIA project or dataset manifest")
      ->required()->check(CLI::ExistingFile);
  evaluate->add_option("predictions", ev.predictions, "Predictions CSV")->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("-o,--output", ev.report, "Report JSON path")->required();
  evaluate->add_option("-c,--config", ev.config, "Match config file");
  evaluate->add_option("--confidence-threshold", ev.confidence_threshold, "Minimum confidence kept");
  evaluate->add_option("--iou-threshold", ev.iou_threshold, "Minimum IOU for a true positive");
  evaluate->add_flag("--macro", ev.macro, "Average per-page precision and recall");

  cli::AblateOptions abl;
  auto* ablate = app.add_subcommand("ablate", "Write leave-one-out augmentation configs");
  ablate->add_option("base", abl.base_config, "All-on base config")->required()
      ->check(CLI::ExistingFile);
  ablate->add_option("-o,--output", abl.output_dir, "Output directory")->required();
  ablate->add_option("--seed", abl.seed, "Seed written into every config");

  cli::ReportOptions rep;
  auto* report = app.add_subcommand("report", "Mean and std of metrics over fold reports");
  report->add_option("reports", rep.reports, "Evaluation report JSON files")->required()
      ->check(CLI::ExistingFile);
  report->add_option("-o,--output", rep.output, "Summary JSON path")->required();
  report->add_flag("--population-std", rep.population_std, "Divide by n instead of n-1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kBadInput;
  }

  try {
    if (*augment) return cli::run_augment(aug, std::cerr);
    if (*induce) return cli::run_induce(ind, std::cerr);
    if (*split) return cli::run_split(spl, std::cerr);
    if (*evaluate) return cli::run_evaluate(ev, std::cerr);
    if (*ablate) return cli::run_ablate(abl, std::cerr);
    if (*report) return cli::run_report(rep, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
  }
  return cli::kInternalError;
}
