#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vtsig/aggregate.hpp"
#include "vtsig/dataset.hpp"
#include "vtsig/dialogue.hpp"
#include "vtsig/experiment.hpp"
#include "vtsig/model.hpp"
#include "vtsig/signature.hpp"
#include "vtsig/stats.hpp"
#include "vtsig/synth.hpp"
#include "vtsig/visibility.hpp"

namespace py = pybind11;

namespace {

Eigen::VectorXd coeffs_of(const vtsig::SignatureVector& sig) {
  return Eigen::Map<const Eigen::VectorXd>(
      sig.coeffs.data(), static_cast<Eigen::Index>(sig.coeffs.size()));
}

}  // namespace

PYBIND11_MODULE(_vtsig, m) {
  m.doc() =
      "Visibility-transform-enhanced truncated path signatures and the "
      "sequence aggregation / evaluation pipeline built on them.";

  m.def("sig_dim", &vtsig::sig_dim, py::arg("dim"), py::arg("level"),
        "Coefficient count of a level-truncated signature: d + d^2 + ... + "
        "d^level.");

  m.def(
      "multi_index_to_flat",
      [](const std::vector<std::size_t>& indices, std::size_t dim) {
        return vtsig::multi_index_to_flat(indices, dim);
      },
      py::arg("indices"), py::arg("dim"));

  m.def("flat_to_multi_index", &vtsig::flat_to_multi_index,
        py::arg("position"), py::arg("dim"));

  m.def(
      "signature",
      [](const Eigen::MatrixXd& points, std::size_t level) {
        return coeffs_of(vtsig::path_signature(points, level));
      },
      py::arg("points"), py::arg("level") = 3,
      "Truncated signature of a piecewise-linear path (rows = time steps).");

  m.def("visibility_transform", &vtsig::visibility_transform, py::arg("seq"));

  m.def(
      "vt_signature",
      [](const std::vector<Eigen::MatrixXd>& turns, std::size_t level) {
        return coeffs_of(vtsig::vt_signature(turns, level));
      },
      py::arg("turns"), py::arg("level") = 3,
      "Interview-level signature of the visibility-transformed turn blocks.");

  m.def("hsf_aggregate", &vtsig::hsf_aggregate, py::arg("turns"),
        "12 statistics per feature dimension over the pooled frames.");

  m.def("sig_aggregate", &vtsig::sig_aggregate, py::arg("turns"),
        py::arg("level") = 3);

  m.def(
      "signature_term_names",
      [](const std::vector<std::string>& columns, std::size_t level,
         bool visibility) {
        vtsig::AggregationConfig config;
        config.method = visibility ? vtsig::AggregationMethod::kVtSig
                                   : vtsig::AggregationMethod::kSig;
        config.level = level;
        return vtsig::aggregate_feature_names(columns, config);
      },
      py::arg("columns"), py::arg("level") = 3, py::arg("visibility") = true);

  m.def("pearson", &vtsig::pearson, py::arg("x"), py::arg("y"));
  m.def("pearson_pvalue", &vtsig::pearson_pvalue, py::arg("r"), py::arg("n"));

  m.def("auroc", &vtsig::auroc, py::arg("scores"), py::arg("labels"));
  m.def("macro_f1", &vtsig::macro_f1, py::arg("predicted"), py::arg("labels"));

  m.def(
      "fit_logreg_l2",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda) {
        const vtsig::LogRegModel model = vtsig::fit_logreg_l2(X, y, lambda);
        return py::make_tuple(model.weights, model.bias);
      },
      py::arg("X"), py::arg("y"), py::arg("lambda_"),
      "Returns (weights, bias) of the L2-penalized logistic fit.");

  m.def(
      "synth_generate",
      [](std::size_t subjects, std::size_t turns, std::size_t frames,
         std::size_t dim, std::uint64_t seed, const std::string& out_dir) {
        vtsig::SynthParams params;
        params.n_subjects = subjects;
        params.turns_per_subject = turns;
        params.frames_per_turn = frames;
        params.dim = dim;
        params.seed = seed;
        return vtsig::synth_generate(params, out_dir).string();
      },
      py::arg("subjects"), py::arg("turns"), py::arg("frames"), py::arg("dim"),
      py::arg("seed"), py::arg("out_dir"));

  m.def(
      "run_experiment",
      [](const std::string& config_path, const std::string& manifest_path,
         const std::string& out_dir) {
        const auto config = vtsig::load_experiment_config(config_path);
        const auto dataset = vtsig::ingest(manifest_path);
        const auto outcome = vtsig::run_experiment(config, dataset, out_dir);
        return py::make_tuple(outcome.exit_code,
                              outcome.report_json.string());
      },
      py::arg("config_path"), py::arg("manifest_path"), py::arg("out_dir"),
      "Returns (exit_code, report_json_path).");
}
