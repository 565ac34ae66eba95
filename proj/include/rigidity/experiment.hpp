#pragma once

#include "rigidity/asymptotics.hpp"
#include "rigidity/entropy.hpp"
#include "rigidity/normal_form.hpp"
#include "rigidity/report.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rigidity {

// ---- shift configs

// [shift], [roof] and [potential] hold `row = ...` lines; [measure] sections add `name`.
struct SftConfig {
  std::string name;
  std::string path;
  MarkovSystem system;
  std::map<std::string, MarkovMeasure> measures;
  std::optional<double> gamma;
};

SftConfig load_sft(const std::string& path);
// Roof from the [roof] section of a separate file.
Matrix64 load_roof(const std::string& path, int m);

// ---- experiment configs

struct FitSpec {
  std::string model;  // period, trace or series
  int order = 0;      // P for series
};

std::vector<FitSpec> parse_fit_list(const std::string& text);

struct ExperimentConfig {
  std::string name;
  std::string path;
  std::string table_path;
  int precision = 256;
  std::vector<SymbolicWord> words;
  SymbolicWord block, connector;
  int n_max = 30;
  std::vector<FitSpec> fits;
  int invariants = 3;
  int nf_order = 8;
  int depth = 20;
  double dispersion_tolerance = 1e-30;
  // optional suspension stage
  std::string sft_path;
  double c_mu = 0, c_top = 0;
  FlexRegion region = FlexRegion::II;
  std::string out_dir;

  bool has_suspension() const { return !sft_path.empty(); }
};

ExperimentConfig load_experiment(const std::string& path);
// Fails fast: files parse, precision, word admissibility and the n_max ceiling.
void validate_experiment(const ExperimentConfig& config);

struct StageRecord {
  std::string name;
  std::string status;  // complete, failed, skipped
  std::vector<std::string> files;
  std::string error_kind;
  std::string message;
};

struct PipelineResult {
  int exit_code = 0;
  std::vector<StageRecord> stages;
  Document summary;
};

// Runs every stage into out_dir (created if needed); writes MANIFEST last.
PipelineResult run_pipeline(const ExperimentConfig& config, const std::string& out_dir);

// ---- documents shared by the CLI and the pipeline

Document orbit_document(const PeriodicOrbit& orbit);
Document normal_form_document(const NormalForm& nf);
Document frame_document(const HomoclinicFrame& frame);
Document fit_document(const FitReport& fit);
Document rigidity_document(const RigidityReport& report);
Document measure_document(const MarkovMeasure& mu);
Document matrix_document(const Matrix64& m);
Document flexibility_document(const FlexibilityResult& result);

std::string family_csv(const HorseshoeFamily& family);
std::string orbits_csv(const std::vector<PeriodicOrbit>& orbits);
std::string sweep_csv(const std::vector<SweepPoint>& points);

FitReport apply_fit(const HorseshoeFamily& family, const FitSpec& spec);

}  // namespace rigidity
