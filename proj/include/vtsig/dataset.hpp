#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vtsig/dialogue.hpp"

namespace vtsig {

enum class Diagnosis { kHealthy, kBipolar, kBorderline };

std::string to_string(Diagnosis diagnosis);
Diagnosis diagnosis_from_string(const std::string& s);

enum class FeatureLevel { kFrame, kTurn };

// One feature-set declaration from the manifest. Frame-level sets are backed
// by per-turn matrix files; turn-level sets are computed from the turn
// timing metadata (the dialogue features) and their columns must name a
// subset of kDialogueFeatureNames. `turn_scaled` declares audio features
// scaled per turn into [-1, 1]; values outside that range then warn.
struct FeatureSetDecl {
  std::string name;
  std::vector<std::string> columns;
  FeatureLevel level = FeatureLevel::kFrame;
  bool turn_scaled = false;
};

struct ControlVariables {
  std::string environment;
  std::string interviewer;
  std::string gender;
};

struct Turn {
  TurnRecord record;
  // feature-set name -> loaded per-turn matrix (frames x columns)
  std::map<std::string, Eigen::MatrixXd> matrices;
};

struct Subject {
  std::string id;
  Diagnosis diagnosis = Diagnosis::kHealthy;
  std::optional<double> score;
  ControlVariables controls;
  std::vector<Turn> turns;
};

struct IngestSummary {
  std::size_t subjects = 0;
  std::size_t turns = 0;
  std::size_t short_turns_filtered = 0;
  std::vector<std::string> warnings;
};

struct Dataset {
  std::string name;
  std::vector<FeatureSetDecl> feature_sets;
  std::vector<Subject> subjects;
  IngestSummary summary;
};

struct Diagnostic {
  std::string subject;
  std::string path;
  std::string message;
};

class IngestError : public std::runtime_error {
 public:
  IngestError(std::string what, std::vector<Diagnostic> diagnostics)
      : std::runtime_error(std::move(what)),
        diagnostics(std::move(diagnostics)) {}
  std::vector<Diagnostic> diagnostics;
};

/// Parses and validates a manifest, loads every referenced matrix, filters
/// turns shorter than min_turn_s and counts them in the summary. Validation
/// failures raise IngestError with per-record diagnostics.
Dataset ingest(const std::filesystem::path& manifest_path,
               double min_turn_s = 2.0);

}  // namespace vtsig
