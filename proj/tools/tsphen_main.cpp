// Command-line front end. All real work lives in the library; this file
// only maps flags onto a ProjectConfig and exceptions onto exit codes:
//   0 success, 1 fatal configuration or I/O problem, 2 analysis
//   precondition failure (partial results were still written).

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tsphen/pipeline.hpp"

namespace {

struct FlagValues {
    std::string config_path;
    std::string input;
    std::string labels;
    std::string catalog;
    std::string output_dir;
    std::string n_perm;
    std::string k_folds;
    std::string seed;
    std::string regularization;
    std::string top_k;
    std::string threads;
    std::string max_missing_fraction;
};

void add_common_options(CLI::App* cmd, FlagValues& flags) {
    cmd->add_option("-c,--config", flags.config_path,
                    "config file (key = value lines, '#' comments)");
    cmd->add_option("-i,--input", flags.input,
                    "directory of one-column CSVs, or one long-format CSV");
    cmd->add_option("--labels", flags.labels,
                    "labels CSV (series_id,label); default <input>/labels.csv");
    cmd->add_option("-o,--output-dir", flags.output_dir, "output directory");
    cmd->add_option("--threads", flags.threads, "worker threads");
    cmd->add_option("--max-missing-fraction", flags.max_missing_fraction,
                    "largest tolerated fraction of missing values per series");
}

void add_compute_options(CLI::App* cmd, FlagValues& flags) {
    cmd->add_option("--catalog", flags.catalog,
                    "feature catalog JSON (default: built-in catalog)");
}

void add_analyze_options(CLI::App* cmd, FlagValues& flags) {
    cmd->add_option("--n-perm", flags.n_perm, "label permutations per feature");
    cmd->add_option("--k-folds", flags.k_folds, "cross-validation folds");
    cmd->add_option("--seed", flags.seed, "base seed for all randomized steps");
    cmd->add_option("--regularization", flags.regularization,
                    "L2 strength for the linear classifier");
    cmd->add_option("--top-k", flags.top_k, "features kept for correlation clustering");
}

// defaults < config file < explicit flags
tsphen::ProjectConfig build_config(const CLI::App* cmd, const FlagValues& flags) {
    tsphen::ProjectConfig config;
    if (cmd->count("--config") > 0) config = tsphen::load_config(flags.config_path);

    const auto apply = [&](const char* flag, const char* key, const std::string& value) {
        if (cmd->get_option_no_throw(flag) != nullptr && cmd->count(flag) > 0)
            tsphen::apply_config_entry(config, key, value);
    };
    apply("--input", "input", flags.input);
    apply("--labels", "labels", flags.labels);
    apply("--catalog", "catalog", flags.catalog);
    apply("--output-dir", "output_dir", flags.output_dir);
    apply("--n-perm", "n_perm", flags.n_perm);
    apply("--k-folds", "k_folds", flags.k_folds);
    apply("--seed", "seed", flags.seed);
    apply("--regularization", "regularization", flags.regularization);
    apply("--top-k", "top_k", flags.top_k);
    apply("--threads", "threads", flags.threads);
    apply("--max-missing-fraction", "max_missing_fraction", flags.max_missing_fraction);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-series phenotyping: mass feature extraction, "
                 "group-difference ranking, and classification"};
    app.require_subcommand(1);
    FlagValues flags;

    CLI::App* ingest_cmd =
        app.add_subcommand("ingest-check", "validate input series and labels, write nothing");
    add_common_options(ingest_cmd, flags);

    CLI::App* compute_cmd =
        app.add_subcommand("compute", "extract the feature matrix and quality codes");
    add_common_options(compute_cmd, flags);
    add_compute_options(compute_cmd, flags);

    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze", "filter, rank, classify, and project a computed feature matrix");
    add_common_options(analyze_cmd, flags);
    add_analyze_options(analyze_cmd, flags);

    CLI::App* report_cmd =
        app.add_subcommand("report", "summarize analysis outputs as plain text");
    add_common_options(report_cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ingest_cmd->parsed())
            return tsphen::run_ingest_check(build_config(ingest_cmd, flags), std::cout);
        if (compute_cmd->parsed())
            return tsphen::run_compute(build_config(compute_cmd, flags), std::cout);
        if (analyze_cmd->parsed())
            return tsphen::run_analyze(build_config(analyze_cmd, flags), std::cout);
        if (report_cmd->parsed())
            return tsphen::run_report(build_config(report_cmd, flags), std::cout);
    } catch (const tsphen::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const tsphen::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const tsphen::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
