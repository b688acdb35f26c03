// Python bindings for the phenotyping core. The surface mirrors what a
// notebook user actually needs: single-series feature extraction, the
// statistical primitives, and the four pipeline stages driven by keyword
// arguments (same keys as the config file).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "tsphen/featlib.hpp"
#include "tsphen/inference.hpp"
#include "tsphen/learn.hpp"
#include "tsphen/pipeline.hpp"
#include "tsphen/types.hpp"

namespace py = pybind11;
using namespace tsphen;

namespace {

ProjectConfig config_from_kwargs(const py::kwargs& kwargs) {
    ProjectConfig config;
    // the config file (if any) loads first so explicit keywords win
    if (kwargs.contains("config"))
        config = load_config(std::string(py::str(kwargs["config"])));
    for (const auto& item : kwargs) {
        const std::string key = py::str(item.first);
        if (key == "config") continue;
        apply_config_entry(config, key, std::string(py::str(item.second)));
    }
    return config;
}

py::tuple run_stage(int (*stage)(const ProjectConfig&, std::ostream&),
                    const py::kwargs& kwargs) {
    const ProjectConfig config = config_from_kwargs(kwargs);
    std::ostringstream out;
    const int code = stage(config, out);
    return py::make_tuple(code, out.str());
}

}  // namespace

PYBIND11_MODULE(_tsphen, m) {
    m.doc() = "time-series phenotyping core: mass feature extraction, "
              "group-difference ranking, classification";
    m.attr("__version__") = kToolVersion;

    // subclasses of Error map to this one Python exception type; the
    // message carries the detail
    py::register_exception<Error>(m, "TsphenError");

    m.def(
        "feature_ids", [] { return FeatureCatalog::defaults().feature_ids(); },
        "Feature identifiers of the built-in catalog, in catalog order.");

    m.def(
        "extract",
        [](const std::vector<double>& values) {
            Dataset dataset = build_dataset({TimeSeries{"series", values, {}, {}}});
            const FeatureMatrix matrix =
                extract_all(dataset, FeatureCatalog::defaults(), 1);
            py::dict out, quality;
            for (std::size_t col = 0; col < matrix.cols(); ++col) {
                const char* id = matrix.feature_ids[col].c_str();
                out[id] = matrix.value(0, col);
                quality[id] = to_string(matrix.quality_at(0, col));
            }
            return py::make_tuple(out, quality);
        },
        py::arg("values"),
        "Run the built-in catalog on one series. Returns (values, quality) "
        "dicts keyed by feature id; failed cells hold NaN and a non-OK "
        "quality code.");

    m.def(
        "permutation_test",
        [](const std::vector<double>& values, const std::vector<std::string>& labels,
           int n_perm, std::uint64_t seed) {
            const PermutationOutcome outcome =
                permutation_test(values, labels, n_perm, seed);
            return py::make_tuple(outcome.observed_stat, outcome.p_value);
        },
        py::arg("values"), py::arg("labels"), py::arg("n_perm") = 1000,
        py::arg("seed") = 42,
        "Label-permutation test of one feature column. Returns "
        "(observed balanced accuracy, p-value).");

    m.def(
        "bh_fdr",
        [](const std::vector<double>& p_values, double q_level) {
            const FdrResult result = bh_fdr(p_values, q_level);
            return py::make_tuple(result.q_values, result.significant);
        },
        py::arg("p_values"), py::arg("q_level") = 0.05,
        "Benjamini-Hochberg step-up correction. Returns (q_values, "
        "significant flags).");

    m.def(
        "balanced_accuracy",
        [](const std::vector<std::string>& predicted,
           const std::vector<std::string>& actual) {
            return balanced_accuracy(predicted, actual, class_list(actual));
        },
        py::arg("predicted"), py::arg("actual"),
        "Mean per-class recall over the classes present in `actual`.");

    // pipeline stages; keyword arguments use config-file keys, plus
    // config="path" to start from a file. Each returns (exit_code, text).
    m.def("ingest_check",
          [](const py::kwargs& kwargs) { return run_stage(&run_ingest_check, kwargs); },
          "Validate inputs without writing anything.");
    m.def("compute",
          [](const py::kwargs& kwargs) { return run_stage(&run_compute, kwargs); },
          "Extract the feature matrix into output_dir.");
    m.def("analyze",
          [](const py::kwargs& kwargs) { return run_stage(&run_analyze, kwargs); },
          "Filter, rank, classify, and project a computed matrix.");
    m.def("report",
          [](const py::kwargs& kwargs) { return run_stage(&run_report, kwargs); },
          "Render the plain-text summary of an analyzed output_dir.");
}
