// vtsig: dataset validation, synthetic data generation, batch experiments
// over the aggregation x normalization grid, and signature inspection.
//
// Exit codes: 0 success, 1 validation/usage failure, 2 experiment cells
// failed.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "vtsig/csv.hpp"
#include "vtsig/dataset.hpp"
#include "vtsig/experiment.hpp"
#include "vtsig/signature.hpp"
#include "vtsig/synth.hpp"
#include "vtsig/visibility.hpp"

namespace {

int cmd_validate(const std::string& manifest) {
  try {
    const vtsig::Dataset dataset = vtsig::ingest(manifest);
    std::printf("dataset: %s\n", dataset.name.c_str());
    std::printf("subjects: %zu\n", dataset.summary.subjects);
    std::printf("turns: %zu\n", dataset.summary.turns);
    std::printf("short turns filtered (< 2 s): %zu\n",
                dataset.summary.short_turns_filtered);
    for (const auto& warning : dataset.summary.warnings) {
      std::printf("warning: %s\n", warning.c_str());
    }
    std::printf("ok\n");
    return 0;
  } catch (const vtsig::IngestError& error) {
    std::fprintf(stderr, "%s\n", error.what());
    return 1;
  }
}

int cmd_synth(const vtsig::SynthParams& params, const std::string& out_dir) {
  const auto manifest = vtsig::synth_generate(params, out_dir);
  std::printf("wrote %s\n", manifest.string().c_str());
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& manifest,
            const std::string& out_dir, int jobs) {
  vtsig::ExperimentConfig config;
  vtsig::Dataset dataset;
  try {
    config = vtsig::load_experiment_config(config_path);
    if (jobs >= 0) config.jobs = jobs;
    dataset = vtsig::ingest(manifest);
  } catch (const std::exception& error) {
    std::fprintf(stderr, "%s\n", error.what());
    return 1;
  }
  const auto outcome = vtsig::run_experiment(config, dataset, out_dir);
  std::printf("report: %s\n", outcome.report_json.string().c_str());
  std::printf("table:  %s\n", outcome.report_text.string().c_str());
  if (outcome.exit_code != 0) {
    std::fprintf(stderr, "some experiment cells failed; see the report\n");
  }
  return outcome.exit_code;
}

int cmd_sig(const std::string& matrix_path, std::size_t level,
            bool with_visibility) {
  vtsig::CsvMatrix csv;
  try {
    csv = vtsig::read_csv_matrix(matrix_path);
  } catch (const std::exception& error) {
    std::fprintf(stderr, "%s\n", error.what());
    return 1;
  }
  std::vector<std::string> names = csv.header;
  vtsig::SignatureVector sig;
  if (with_visibility) {
    names.push_back("c");
    sig = vtsig::vt_signature({csv.values}, level);
  } else {
    sig = vtsig::path_signature(csv.values, level);
  }
  for (std::size_t pos = 0; pos < sig.coeffs.size(); ++pos) {
    const auto indices = vtsig::flat_to_multi_index(pos, sig.dim);
    std::printf("%s %.12g\n", vtsig::render_term(indices, names).c_str(),
                sig.coeffs[pos]);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"visibility-signature sequence aggregation and experiments"};
  app.require_subcommand(1);

  std::string manifest;
  auto* validate = app.add_subcommand(
      "validate", "validate a dataset manifest and its matrices");
  validate->add_option("manifest", manifest, "manifest JSON path")
      ->required();

  vtsig::SynthParams params;
  std::string out_dir;
  auto* synth = app.add_subcommand(
      "synth", "generate a synthetic order-separability dataset");
  synth->add_option("--subjects", params.n_subjects, "subject count (even)")
      ->required();
  synth->add_option("--turns", params.turns_per_subject,
                    "participant turns per subject")
      ->required();
  synth->add_option("--frames", params.frames_per_turn, "frames per turn")
      ->required();
  synth->add_option("--dim", params.dim, "feature dimension")->required();
  synth->add_option("--seed", params.seed, "RNG seed")->required();
  synth->add_option("--out", out_dir, "output directory")->required();

  std::string config_path;
  int jobs = -1;
  auto* run = app.add_subcommand(
      "run", "run the configured experiment grid on a dataset");
  run->add_option("--config", config_path, "experiment config JSON")
      ->required();
  run->add_option("--manifest", manifest, "manifest JSON path")->required();
  run->add_option("--out", out_dir, "report output directory")->required();
  run->add_option("--jobs", jobs, "outer-fold parallelism (0 = hardware)");

  std::string matrix_path;
  std::size_t level = 3;
  bool with_visibility = false;
  auto* sig = app.add_subcommand(
      "sig", "print the signature of a CSV feature matrix");
  sig->add_option("matrix", matrix_path, "CSV matrix, rows = time steps")
      ->required();
  sig->add_option("--level", level, "truncation level (default 3)");
  sig->add_flag("--visibility", with_visibility,
                "apply the visibility transform first");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(manifest);
    if (synth->parsed()) return cmd_synth(params, out_dir);
    if (run->parsed()) return cmd_run(config_path, manifest, out_dir, jobs);
    if (sig->parsed()) return cmd_sig(matrix_path, level, with_visibility);
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  }
  return 0;
}
