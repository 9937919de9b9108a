#include "vtsig/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "vtsig/csv.hpp"

namespace vtsig {

namespace {

using nlohmann::json;

TurnRecord parse_turn(const json& node) {
  TurnRecord turn;
  turn.speaker = speaker_from_string(node.at("speaker").get<std::string>());
  turn.start_s = node.at("start_s").get<double>();
  turn.end_s = node.at("end_s").get<double>();
  turn.word_count = node.at("word_count").get<int>();
  if (node.contains("voiced_segments")) {
    for (const auto& seg : node.at("voiced_segments")) {
      turn.voiced_segments.emplace_back(seg.at(0).get<double>(),
                                        seg.at(1).get<double>());
    }
  }
  return turn;
}

}  // namespace

std::string to_string(Diagnosis diagnosis) {
  switch (diagnosis) {
    case Diagnosis::kHealthy: return "H";
    case Diagnosis::kBipolar: return "BD";
    case Diagnosis::kBorderline: return "BPD";
  }
  return "?";
}

Diagnosis diagnosis_from_string(const std::string& s) {
  if (s == "H") return Diagnosis::kHealthy;
  if (s == "BD") return Diagnosis::kBipolar;
  if (s == "BPD") return Diagnosis::kBorderline;
  throw std::invalid_argument("unknown diagnosis: " + s);
}

Dataset ingest(const std::filesystem::path& manifest_path,
               double min_turn_s) {
  std::vector<Diagnostic> diagnostics;
  const auto fail = [&](const std::string& subject, const std::string& path,
                        const std::string& message) {
    diagnostics.push_back({subject, path, message});
  };

  std::ifstream in(manifest_path);
  if (!in) {
    throw IngestError("cannot open manifest " + manifest_path.string(), {});
  }
  json root;
  try {
    in >> root;
  } catch (const json::exception& error) {
    throw IngestError(
        "manifest " + manifest_path.string() + " is not valid JSON: " +
            error.what(),
        {});
  }

  Dataset dataset;
  const auto base_dir = manifest_path.parent_path();
  try {
    dataset.name = root.at("name").get<std::string>();
    for (const auto& decl : root.at("feature_sets")) {
      FeatureSetDecl fs;
      fs.name = decl.at("name").get<std::string>();
      fs.columns = decl.at("columns").get<std::vector<std::string>>();
      const std::string level = decl.at("level").get<std::string>();
      if (level == "frame") {
        fs.level = FeatureLevel::kFrame;
      } else if (level == "turn") {
        fs.level = FeatureLevel::kTurn;
      } else {
        throw std::invalid_argument("feature set " + fs.name +
                                    ": level must be 'frame' or 'turn'");
      }
      fs.turn_scaled = decl.value("turn_scaled", false);
      if (fs.level == FeatureLevel::kTurn) {
        for (const auto& col : fs.columns) {
          const bool known =
              std::any_of(kDialogueFeatureNames.begin(),
                          kDialogueFeatureNames.end(),
                          [&](const char* n) { return col == n; });
          if (!known) {
            throw std::invalid_argument(
                "feature set " + fs.name + ": unknown dialogue column '" +
                col + "'");
          }
        }
      }
      if (fs.columns.empty()) {
        throw std::invalid_argument("feature set " + fs.name +
                                    " declares no columns");
      }
      dataset.feature_sets.push_back(std::move(fs));
    }
  } catch (const std::exception& error) {
    throw IngestError(std::string("manifest header: ") + error.what(), {});
  }

  std::set<std::string> seen_ids;
  for (const auto& snode : root.at("subjects")) {
    Subject subject;
    std::string sid = "?";
    try {
      sid = snode.at("id").get<std::string>();
      subject.id = sid;
      if (!seen_ids.insert(sid).second) {
        fail(sid, "", "duplicate subject id");
        continue;
      }
      subject.diagnosis =
          diagnosis_from_string(snode.at("diagnosis").get<std::string>());
      if (snode.contains("score") && !snode.at("score").is_null()) {
        subject.score = snode.at("score").get<double>();
      }
      const auto& controls = snode.at("controls");
      subject.controls.environment =
          controls.at("environment").get<std::string>();
      subject.controls.interviewer =
          controls.at("interviewer").get<std::string>();
      subject.controls.gender = controls.at("gender").get<std::string>();
    } catch (const std::exception& error) {
      fail(sid, "", std::string("subject record: ") + error.what());
      continue;
    }

    std::vector<TurnRecord> records;
    std::vector<json> feature_refs;
    bool subject_ok = true;
    for (const auto& tnode : snode.at("turns")) {
      try {
        records.push_back(parse_turn(tnode));
        feature_refs.push_back(tnode.value("features", json::object()));
      } catch (const std::exception& error) {
        fail(sid, "", std::string("turn record: ") + error.what());
        subject_ok = false;
        break;
      }
    }
    if (!subject_ok) continue;

    try {
      validate_turns(records);
    } catch (const std::exception& error) {
      fail(sid, "", error.what());
      continue;
    }

    // Short-turn filter, tracked in the summary; feature references move
    // with their surviving turns.
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].end_s - records[i].start_s >= min_turn_s) {
        kept.push_back(i);
      }
    }
    dataset.summary.short_turns_filtered += records.size() - kept.size();
    if (kept.empty()) {
      fail(sid, "", "no turns remain after the short-turn filter");
      continue;
    }

    for (std::size_t i : kept) {
      Turn turn;
      turn.record = records[i];
      for (const auto& [fs_name, ref] : feature_refs[i].items()) {
        const auto decl = std::find_if(
            dataset.feature_sets.begin(), dataset.feature_sets.end(),
            [&](const FeatureSetDecl& fs) { return fs.name == fs_name; });
        if (decl == dataset.feature_sets.end()) {
          fail(sid, "", "turn references undeclared feature set " + fs_name);
          subject_ok = false;
          break;
        }
        if (decl->level != FeatureLevel::kFrame) {
          fail(sid, "",
               "turn-level feature set " + fs_name +
                   " must not reference matrix files");
          subject_ok = false;
          break;
        }
        const auto path = base_dir / ref.get<std::string>();
        CsvMatrix csv;
        try {
          csv = read_csv_matrix(path);
        } catch (const std::exception& error) {
          fail(sid, path.string(), error.what());
          subject_ok = false;
          break;
        }
        if (csv.header.size() != decl->columns.size()) {
          fail(sid, path.string(),
               "matrix has " + std::to_string(csv.header.size()) +
                   " columns but feature set " + fs_name + " declares " +
                   std::to_string(decl->columns.size()));
          subject_ok = false;
          break;
        }
        if (csv.values.rows() < 1) {
          fail(sid, path.string(), "matrix has no frame rows");
          subject_ok = false;
          break;
        }
        if (!csv.values.allFinite()) {
          fail(sid, path.string(), "matrix contains non-finite values");
          subject_ok = false;
          break;
        }
        if (decl->turn_scaled &&
            (csv.values.minCoeff() < -1.0 || csv.values.maxCoeff() > 1.0)) {
          dataset.summary.warnings.push_back(
              "subject " + sid + ", " + path.string() +
              ": values outside [-1, 1] in turn-scaled feature set " +
              fs_name);
        }
        turn.matrices[fs_name] = std::move(csv.values);
      }
      if (!subject_ok) break;
      subject.turns.push_back(std::move(turn));
    }
    if (!subject_ok) continue;

    dataset.summary.turns += subject.turns.size();
    dataset.subjects.push_back(std::move(subject));
  }

  if (!diagnostics.empty()) {
    std::string what = "manifest validation failed with " +
                       std::to_string(diagnostics.size()) + " error(s)";
    for (const auto& d : diagnostics) {
      what += "\n  subject " + d.subject +
              (d.path.empty() ? "" : " [" + d.path + "]") + ": " + d.message;
    }
    throw IngestError(what, diagnostics);
  }
  if (dataset.subjects.empty()) {
    throw IngestError("manifest contains no subjects", {});
  }
  dataset.summary.subjects = dataset.subjects.size();
  return dataset;
}

}  // namespace vtsig
