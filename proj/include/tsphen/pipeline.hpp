#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tsphen/featlib.hpp"
#include "tsphen/types.hpp"

namespace tsphen {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything a pipeline run needs, collected from the config file and flag
/// overrides. String paths stay empty when unset; numeric fields carry the
/// documented defaults.
struct ProjectConfig {
    std::string input;       // series directory or long-format CSV
    std::string labels;      // labels.csv; defaults to <input>/labels.csv for directories
    std::string catalog;     // optional catalog JSON; empty = built-in defaults
    std::string output_dir = "tsphen_out";
    int n_perm = 1000;
    int k_folds = 10;
    std::uint64_t seed = 42;
    double regularization = 0.01;
    int top_k = 40;
    int threads = 1;
    double max_missing_fraction = 0.15;

    /// Throws ConfigError when a field is out of its documented range.
    void validate() const;
};

/// Flat key = value file, one pair per line, '#' comments. Unknown keys are
/// errors so typos fail loudly. Keys: input, labels, catalog, output_dir,
/// n_perm, k_folds, seed, regularization, top_k, threads,
/// max_missing_fraction.
ProjectConfig load_config(const std::filesystem::path& path);

/// One key = value assignment applied to a config (shared by the file
/// loader and command-line overrides).
void apply_config_entry(ProjectConfig& config, const std::string& key,
                        const std::string& value);

struct RejectedSeries {
    std::string series_id;
    std::string reason;
};

struct IngestResult {
    Dataset dataset;  // series sorted by id, labels attached
    std::vector<RejectedSeries> rejected;
    /// input file name -> content digest, for the manifest
    std::vector<std::pair<std::string, std::string>> input_digests;
};

/// Loads series from a directory of one-column CSVs or a single long-format
/// CSV, applies the missing-data trim rule per series, attaches labels.
/// Data problems in one series reject only that series; structural problems
/// (unreadable files, duplicate or dangling label ids) throw.
IngestResult ingest(const ProjectConfig& config);

/// Writes a feature matrix as the features/quality CSV pair.
void write_feature_matrix(const std::filesystem::path& features_path,
                          const std::filesystem::path& quality_path,
                          const FeatureMatrix& matrix);

/// Reads the pair back; the result compares equal to what was written.
FeatureMatrix read_feature_matrix(const std::filesystem::path& features_path,
                                  const std::filesystem::path& quality_path);

// Subcommand drivers. Progress and summaries go to `out`; fatal problems
// throw (the CLI maps them to exit 1); analysis-precondition failures are
// recorded in the manifest and reported via exit code 2.

int run_ingest_check(const ProjectConfig& config, std::ostream& out);
int run_compute(const ProjectConfig& config, std::ostream& out);
int run_analyze(const ProjectConfig& config, std::ostream& out);
int run_report(const ProjectConfig& config, std::ostream& out);

}  // namespace tsphen
