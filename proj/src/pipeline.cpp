#include "tsphen/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tsphen/csvio.hpp"
#include "tsphen/inference.hpp"
#include "tsphen/learn.hpp"
#include "tsphen/preprocess.hpp"
#include "tsphen/quality.hpp"
#include "tsphen/serialize.hpp"

namespace tsphen {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void ProjectConfig::validate() const {
    if (n_perm < 1) throw ConfigError("n_perm must be >= 1");
    if (k_folds < 2) throw ConfigError("k_folds must be >= 2");
    if (top_k < 1) throw ConfigError("top_k must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (regularization < 0.0) throw ConfigError("regularization must be >= 0");
    if (!(max_missing_fraction >= 0.0 && max_missing_fraction < 1.0))
        throw ConfigError("max_missing_fraction must be in [0, 1)");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

namespace {

std::string trim(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    std::size_t last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

long long parse_integer(const std::string& value, const std::string& key) {
    long long out = 0;
    const char* first = value.data();
    const char* last = first + value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last)
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    return out;
}

double parse_real(const std::string& value, const std::string& key) {
    try {
        const double out = csv::parse_double(value);
        if (!std::isfinite(out)) throw ConfigError("");
        return out;
    } catch (const ConfigError&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

}  // namespace

void apply_config_entry(ProjectConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "input") config.input = value;
    else if (key == "labels") config.labels = value;
    else if (key == "catalog") config.catalog = value;
    else if (key == "output_dir") config.output_dir = value;
    else if (key == "n_perm") config.n_perm = static_cast<int>(parse_integer(value, key));
    else if (key == "k_folds") config.k_folds = static_cast<int>(parse_integer(value, key));
    else if (key == "seed")
        config.seed = static_cast<std::uint64_t>(parse_integer(value, key));
    else if (key == "regularization") config.regularization = parse_real(value, key);
    else if (key == "top_k") config.top_k = static_cast<int>(parse_integer(value, key));
    else if (key == "threads") config.threads = static_cast<int>(parse_integer(value, key));
    else if (key == "max_missing_fraction") config.max_missing_fraction = parse_real(value, key);
    else throw ConfigError("unknown config key '" + key + "'");
}

ProjectConfig load_config(const fs::path& path) {
    const std::string text = csv::read_text(path);
    ProjectConfig config;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key = value");
        apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

namespace {

struct RawSeries {
    std::string id;
    std::vector<double> values;
};

// One value per line, optional single header line. Blank lines carry no
// cell (so trailing newlines are harmless); missing values must be spelled
// out (nan, NA, or an empty quoted cell is not supported here).
std::optional<std::vector<double>> parse_one_column(const std::string& text) {
    std::vector<double> values;
    std::istringstream lines(text);
    std::string line;
    bool allow_header = true;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string cell = trim(line);
        if (cell.empty()) continue;
        if (cell.find(',') != std::string::npos) return std::nullopt;
        try {
            values.push_back(csv::parse_double(cell));
        } catch (const ConfigError&) {
            if (allow_header) {
                allow_header = false;
                continue;
            }
            return std::nullopt;
        }
        allow_header = false;
    }
    return values;
}

std::map<std::string, std::string> load_labels(const fs::path& labels_path,
                                               IngestResult& result) {
    const std::string text = csv::read_text(labels_path);
    result.input_digests.emplace_back(labels_path.filename().string(), csv::fnv1a_hex(text));

    csv::Table table = csv::read_csv(labels_path);
    if (table.header != std::vector<std::string>{"series_id", "label"})
        throw ConfigError(labels_path.string() + ": header must be series_id,label");
    std::map<std::string, std::string> labels;
    for (const auto& row : table.rows) {
        if (row[0].empty() || row[1].empty())
            throw ConfigError(labels_path.string() + ": empty series_id or label");
        if (!labels.emplace(row[0], row[1]).second)
            throw ConfigError(labels_path.string() + ": duplicate series_id '" + row[0] + "'");
    }
    return labels;
}

void ingest_directory(const fs::path& input, const fs::path& labels_path,
                      std::vector<RawSeries>& raw, IngestResult& result) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        if (p.extension() != ".csv") continue;
        if (fs::exists(labels_path) && fs::equivalent(p, labels_path)) continue;
        files.push_back(p);
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.stem() < b.stem(); });

    for (const fs::path& file : files) {
        const std::string id = file.stem().string();
        const std::string text = csv::read_text(file);  // unreadable file -> fatal IoError
        result.input_digests.emplace_back(file.filename().string(), csv::fnv1a_hex(text));
        const auto values = parse_one_column(text);
        if (!values) {
            result.rejected.push_back({id, "unparseable"});
            continue;
        }
        if (values->empty()) {
            result.rejected.push_back({id, "empty"});
            continue;
        }
        raw.push_back({id, *values});
    }
}

void ingest_long_format(const fs::path& input, std::vector<RawSeries>& raw,
                        IngestResult& result) {
    const std::string text = csv::read_text(input);
    result.input_digests.emplace_back(input.filename().string(), csv::fnv1a_hex(text));
    csv::Table table = csv::read_csv(input);
    if (table.header != std::vector<std::string>{"series_id", "t_index", "value"})
        throw ConfigError(input.string() + ": header must be series_id,t_index,value");

    std::map<std::string, std::vector<std::pair<long long, double>>> groups;
    std::set<std::string> poisoned;
    for (const auto& row : table.rows) {
        const std::string& id = row[0];
        if (id.empty()) throw ConfigError(input.string() + ": empty series_id");
        if (poisoned.count(id)) continue;
        try {
            const long long t = parse_integer(row[1], "t_index");
            groups[id].emplace_back(t, csv::parse_double(row[2]));
        } catch (const ConfigError&) {
            poisoned.insert(id);
            groups.erase(id);
        }
    }
    for (const auto& id : poisoned) result.rejected.push_back({id, "unparseable"});

    for (auto& [id, points] : groups) {
        std::sort(points.begin(), points.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        bool consecutive = true;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (points[i].first != static_cast<long long>(i)) {
                consecutive = false;
                break;
            }
        if (!consecutive) {
            result.rejected.push_back({id, "bad_t_index"});
            continue;
        }
        RawSeries series{id, {}};
        series.values.reserve(points.size());
        for (const auto& [t, v] : points) series.values.push_back(v);
        raw.push_back(std::move(series));
    }
}

}  // namespace

IngestResult ingest(const ProjectConfig& config) {
    if (config.input.empty()) throw ConfigError("input path is required");
    const fs::path input(config.input);
    if (!fs::exists(input)) throw IoError("input not found: " + input.string());

    const bool directory_mode = fs::is_directory(input);
    fs::path labels_path;
    if (!config.labels.empty()) labels_path = config.labels;
    else if (directory_mode) labels_path = input / "labels.csv";
    else throw ConfigError("long-format input requires an explicit labels path");
    if (!fs::exists(labels_path)) throw IoError("labels file not found: " + labels_path.string());

    IngestResult result;
    std::vector<RawSeries> raw;
    if (directory_mode) ingest_directory(input, labels_path, raw, result);
    else ingest_long_format(input, raw, result);

    // ids must be unique across accepted and rejected series
    {
        std::set<std::string> seen;
        for (const auto& s : raw)
            if (!seen.insert(s.id).second)
                throw ConfigError("duplicate series id '" + s.id + "'");
        for (const auto& r : result.rejected)
            if (!seen.insert(r.series_id).second)
                throw ConfigError("duplicate series id '" + r.series_id + "'");
    }

    const auto labels = load_labels(labels_path, result);
    for (const auto& [id, label] : labels) {
        const bool known =
            std::any_of(raw.begin(), raw.end(), [&](const RawSeries& s) { return s.id == id; }) ||
            std::any_of(result.rejected.begin(), result.rejected.end(),
                        [&](const RejectedSeries& r) { return r.series_id == id; });
        if (!known)
            throw ConfigError("labels file names unknown series '" + id + "'");
    }

    std::vector<TimeSeries> series;
    for (RawSeries& candidate : raw) {
        auto trimmed = trim_missing(candidate.values, config.max_missing_fraction);
        if (!trimmed.ok()) {
            result.rejected.push_back({candidate.id, to_string(*trimmed.rejected)});
            continue;
        }
        const auto it = labels.find(candidate.id);
        if (it == labels.end())
            throw ConfigError("series '" + candidate.id + "' has no label in labels file");
        TimeSeries ts;
        ts.id = candidate.id;
        ts.values = std::move(trimmed.values);
        ts.label = it->second;
        series.push_back(std::move(ts));
    }

    std::sort(series.begin(), series.end(),
              [](const TimeSeries& a, const TimeSeries& b) { return a.id < b.id; });
    std::sort(result.rejected.begin(), result.rejected.end(),
              [](const RejectedSeries& a, const RejectedSeries& b) {
                  return a.series_id < b.series_id;
              });
    result.dataset = build_dataset(std::move(series));
    return result;
}

// ---------------------------------------------------------------------------
// Feature matrix files
// ---------------------------------------------------------------------------

void write_feature_matrix(const fs::path& features_path, const fs::path& quality_path,
                          const FeatureMatrix& matrix) {
    csv::Table features, quality;
    features.header.push_back("series_id");
    for (const auto& id : matrix.feature_ids) features.header.push_back(id);
    quality.header = features.header;

    for (std::size_t row = 0; row < matrix.rows(); ++row) {
        std::vector<std::string> value_row{matrix.series_ids[row]};
        std::vector<std::string> code_row{matrix.series_ids[row]};
        for (std::size_t col = 0; col < matrix.cols(); ++col) {
            value_row.push_back(csv::format_double(matrix.value(row, col)));
            code_row.push_back(to_string(matrix.quality_at(row, col)));
        }
        features.rows.push_back(std::move(value_row));
        quality.rows.push_back(std::move(code_row));
    }
    csv::write_csv_atomic(features_path, features);
    csv::write_csv_atomic(quality_path, quality);
}

FeatureMatrix read_feature_matrix(const fs::path& features_path, const fs::path& quality_path) {
    const csv::Table features = csv::read_csv(features_path);
    const csv::Table quality = csv::read_csv(quality_path);
    if (features.header.empty() || features.header[0] != "series_id")
        throw ConfigError(features_path.string() + ": first column must be series_id");
    if (features.header != quality.header)
        throw ConfigError("features/quality headers do not match");
    if (features.rows.size() != quality.rows.size())
        throw ConfigError("features/quality row counts do not match");

    std::vector<std::string> series_ids, feature_ids(features.header.begin() + 1,
                                                     features.header.end());
    for (const auto& row : features.rows) series_ids.push_back(row[0]);
    for (std::size_t i = 0; i < quality.rows.size(); ++i)
        if (quality.rows[i][0] != series_ids[i])
            throw ConfigError("features/quality series ids do not match");

    FeatureMatrix matrix(series_ids, feature_ids);
    for (std::size_t row = 0; row < features.rows.size(); ++row)
        for (std::size_t col = 0; col < feature_ids.size(); ++col) {
            const std::string& code_name = quality.rows[row][col + 1];
            const auto code = quality_code_from_string(code_name);
            if (!code)
                throw ConfigError(quality_path.string() + ": unknown quality code '" +
                                  code_name + "'");
            matrix.set(row, col, {csv::parse_double(features.rows[row][col + 1]), *code});
        }
    return matrix;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

namespace {

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json config_snapshot(const ProjectConfig& config) {
    return {{"input", config.input},
            {"labels", config.labels},
            {"catalog", config.catalog},
            {"output_dir", config.output_dir},
            {"n_perm", config.n_perm},
            {"k_folds", config.k_folds},
            {"seed", config.seed},
            {"regularization", config.regularization},
            {"top_k", config.top_k},
            {"threads", config.threads},
            {"max_missing_fraction", config.max_missing_fraction}};
}

json read_manifest(const fs::path& path) {
    if (!fs::exists(path)) return json::object();
    json doc = json::parse(csv::read_text(path), nullptr, false);
    if (doc.is_discarded()) throw ConfigError(path.string() + ": malformed JSON");
    return doc;
}

void write_manifest(const fs::path& path, const json& doc) {
    csv::write_text_atomic(path, doc.dump(2) + "\n");
}

}  // namespace

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int run_ingest_check(const ProjectConfig& config, std::ostream& out) {
    config.validate();
    const IngestResult result = ingest(config);
    out << "input: " << config.input << "\n";
    out << "series accepted: " << result.dataset.size() << "\n";
    for (std::size_t c = 0; c < result.dataset.classes.size(); ++c)
        out << "  class " << result.dataset.classes[c] << ": "
            << result.dataset.class_counts[c] << "\n";
    out << "series rejected: " << result.rejected.size() << "\n";
    for (const auto& r : result.rejected)
        out << "  " << r.series_id << ": " << r.reason << "\n";
    return 0;
}

int run_compute(const ProjectConfig& config, std::ostream& out) {
    config.validate();
    const IngestResult result = ingest(config);
    if (result.dataset.size() == 0) throw ConfigError("no series survived ingestion");

    FeatureCatalog catalog;
    if (config.catalog.empty()) catalog = FeatureCatalog::defaults();
    else catalog = catalog_from_json(csv::read_text(config.catalog));
    if (catalog.empty()) throw ConfigError("catalog has no features");
    const std::string catalog_text = catalog_to_json(catalog);

    const FeatureMatrix matrix = extract_all(result.dataset, catalog, config.threads);

    const fs::path outdir(config.output_dir);
    fs::create_directories(outdir);
    write_feature_matrix(outdir / "features.csv", outdir / "quality.csv", matrix);
    csv::write_text_atomic(outdir / "catalog.json", catalog_text);

    csv::Table labels;
    labels.header = {"series_id", "label"};
    for (const auto& s : result.dataset.series)
        labels.rows.push_back({s.id, s.label.value_or("")});
    csv::write_csv_atomic(outdir / "labels.csv", labels);

    json manifest = read_manifest(outdir / "manifest.json");
    manifest["tool_version"] = kToolVersion;
    json rejected = json::array();
    for (const auto& r : result.rejected)
        rejected.push_back({{"series_id", r.series_id}, {"reason", r.reason}});
    json inputs = json::object();
    for (const auto& [name, digest] : result.input_digests) inputs[name] = digest;
    manifest["compute"] = {{"timestamp", timestamp_utc()},
                           {"catalog_hash", csv::fnv1a_hex(catalog_text)},
                           {"config", config_snapshot(config)},
                           {"inputs", inputs},
                           {"rejected_series", rejected},
                           {"n_series", result.dataset.size()},
                           {"n_features", catalog.size()},
                           {"classes", result.dataset.classes},
                           {"class_counts", result.dataset.class_counts}};
    write_manifest(outdir / "manifest.json", manifest);

    out << "computed " << catalog.size() << " features for " << result.dataset.size()
        << " series";
    if (!result.rejected.empty()) out << " (" << result.rejected.size() << " rejected)";
    out << "\n" << "wrote " << (outdir / "features.csv").string() << "\n";
    return 0;
}

namespace {

std::vector<std::string> labels_for_matrix(const fs::path& labels_path,
                                           const FeatureMatrix& matrix) {
    const csv::Table table = csv::read_csv(labels_path);
    if (table.header != std::vector<std::string>{"series_id", "label"})
        throw ConfigError(labels_path.string() + ": header must be series_id,label");
    std::map<std::string, std::string> by_id;
    for (const auto& row : table.rows) by_id[row[0]] = row[1];
    std::vector<std::string> labels;
    for (const auto& id : matrix.series_ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end() || it->second.empty())
            throw ConfigError("no label for series '" + id + "'");
        labels.push_back(it->second);
    }
    return labels;
}

void write_top_features_csv(const fs::path& path, const RankingResult& ranking,
                            std::size_t top_k) {
    csv::Table table;
    table.header = {"rank",  "feature_id",  "observed_stat", "p_value", "q_value",
                    "significant", "class", "median",        "q1",      "q3"};
    for (std::size_t i = 0; i < std::min(top_k, ranking.features.size()); ++i) {
        const FeatureRanking& row = ranking.features[i];
        for (const ClassSummary& s : row.class_summaries)
            table.rows.push_back({std::to_string(i + 1), row.feature_id,
                                  csv::format_double(row.observed_stat),
                                  csv::format_double(row.p_value),
                                  csv::format_double(row.q_value),
                                  row.significant ? "true" : "false", s.class_label,
                                  csv::format_double(s.median), csv::format_double(s.q1),
                                  csv::format_double(s.q3)});
    }
    csv::write_csv_atomic(path, table);
}

void write_pca_scores_csv(const fs::path& path, const PcaProjection& projection,
                          const std::vector<std::string>& labels) {
    csv::Table table;
    table.header = {"series_id", "label"};
    for (std::size_t c = 0; c < projection.n_components; ++c)
        table.header.push_back("pc" + std::to_string(c + 1));
    for (std::size_t i = 0; i < projection.series_ids.size(); ++i) {
        std::vector<std::string> row = {projection.series_ids[i], labels[i]};
        for (double score : projection.scores[i]) row.push_back(csv::format_double(score));
        table.rows.push_back(std::move(row));
    }
    csv::write_csv_atomic(path, table);
}

void write_correlation_csv(const fs::path& path, const CorrelationCluster& cluster) {
    // rows and columns follow the dendrogram leaf order so the file plots
    // directly as a block-structured heatmap
    csv::Table table;
    table.header = {"feature_id"};
    for (std::size_t leaf : cluster.leaf_order)
        table.header.push_back(cluster.feature_ids[leaf]);
    for (std::size_t a : cluster.leaf_order) {
        std::vector<std::string> row = {cluster.feature_ids[a]};
        for (std::size_t b : cluster.leaf_order)
            row.push_back(csv::format_double(cluster.abs_spearman[a][b]));
        table.rows.push_back(std::move(row));
    }
    csv::write_csv_atomic(path, table);
}

}  // namespace

int run_analyze(const ProjectConfig& config, std::ostream& out) {
    config.validate();
    const fs::path outdir(config.output_dir);
    for (const char* name : {"features.csv", "quality.csv", "labels.csv"})
        if (!fs::exists(outdir / name))
            throw IoError((outdir / name).string() +
                          " not found; run the compute step first");

    const FeatureMatrix matrix =
        read_feature_matrix(outdir / "features.csv", outdir / "quality.csv");
    const std::vector<std::string> labels = labels_for_matrix(outdir / "labels.csv", matrix);
    const auto classes = class_list(labels);
    std::vector<std::size_t> class_counts(classes.size(), 0);
    for (const auto& label : labels)
        ++class_counts[static_cast<std::size_t>(
            std::lower_bound(classes.begin(), classes.end(), label) - classes.begin())];

    json manifest = read_manifest(outdir / "manifest.json");
    json errors = json::object();
    json warnings = json::array();

    // filter -> rank (raw) -> normalize -> cross-validate -> pca -> cluster
    FilterReport filter_report;
    try {
        filter_report = filter_features(matrix);
    } catch (const EmptyResultError& err) {
        errors["filter"] = err.what();
        manifest["tool_version"] = kToolVersion;
        manifest["analyze"] = {{"timestamp", timestamp_utc()},
                               {"config", config_snapshot(config)},
                               {"classes", classes},
                               {"class_counts", class_counts},
                               {"errors", errors},
                               {"warnings", warnings}};
        write_manifest(outdir / "manifest.json", manifest);
        out << "analysis failed: " << err.what() << "\n";
        return 2;
    }
    const FeatureMatrix restricted = matrix.restrict_columns(filter_report.kept_feature_ids);

    const bool enough_classes = classes.size() >= 2;
    if (!enough_classes) {
        errors["rank"] = "MISSING_CLASS: need at least two labeled classes";
        errors["classify"] = "MISSING_CLASS: need at least two labeled classes";
    }

    std::optional<RankingResult> ranking;
    if (enough_classes) {
        try {
            ranking = rank_features(restricted, labels, config.n_perm, config.seed, 0.05,
                                    config.threads);
            csv::write_text_atomic(outdir / "ranking.json", ranking_to_json(*ranking));
        } catch (const Error& err) {
            errors["rank"] = err.what();
        }
    }

    std::optional<NormalizeResult> normalized;
    try {
        normalized = normalize_sigmoid(restricted);
    } catch (const EmptyResultError& err) {
        errors["normalize"] = err.what();
    }
    csv::write_text_atomic(
        outdir / "filter_report.json",
        filter_report_to_json(filter_report,
                              normalized ? normalized->zero_iqr_dropped
                                         : std::vector<std::string>{}));

    std::size_t clamped_top_k = static_cast<std::size_t>(config.top_k);
    if (ranking) {
        if (clamped_top_k > ranking->features.size()) {
            clamped_top_k = ranking->features.size();
            warnings.push_back("top_k clamped from " + std::to_string(config.top_k) + " to " +
                               std::to_string(clamped_top_k) +
                               " (only that many features survived)");
        }
        write_top_features_csv(outdir / "top_features.csv", *ranking, clamped_top_k);
    }

    if (normalized && enough_classes) {
        try {
            const ClassifierReport report = cross_validate(
                normalized->matrix, labels, config.k_folds, config.regularization, config.seed);
            csv::write_text_atomic(outdir / "classification.json",
                                   classifier_report_to_json(report, matrix.series_ids));
        } catch (const Error& err) {
            errors["classify"] = err.what();
        } catch (const std::invalid_argument& err) {
            errors["classify"] = err.what();
        }
    }

    if (normalized) {
        try {
            const PcaProjection projection = pca(normalized->matrix, 2);
            write_pca_scores_csv(outdir / "pca_scores.csv", projection, labels);
        } catch (const Error& err) {
            errors["pca"] = err.what();
        } catch (const std::invalid_argument& err) {
            errors["pca"] = err.what();
        }
    }

    if (ranking) {
        try {
            const CorrelationCluster cluster =
                correlation_cluster(restricted, *ranking, clamped_top_k);
            write_correlation_csv(outdir / "correlation_matrix.csv", cluster);
        } catch (const Error& err) {
            errors["cluster"] = err.what();
        }
    }

    manifest["tool_version"] = kToolVersion;
    manifest["analyze"] = {{"timestamp", timestamp_utc()},
                           {"config", config_snapshot(config)},
                           {"classes", classes},
                           {"class_counts", class_counts},
                           {"n_features_input", matrix.cols()},
                           {"n_features_kept", filter_report.kept_feature_ids.size()},
                           {"errors", errors},
                           {"warnings", warnings}};
    write_manifest(outdir / "manifest.json", manifest);

    const bool partial = !errors.empty();
    out << "analyzed " << matrix.rows() << " series x " << matrix.cols() << " features; kept "
        << filter_report.kept_feature_ids.size() << " after filtration\n";
    if (ranking)
        out << "features significant at q < 0.05: " << ranking->n_significant << "\n";
    for (const auto& [stage, message] : errors.items())
        out << "stage '" << stage << "' failed: " << message.get<std::string>() << "\n";
    return partial ? 2 : 0;
}

int run_report(const ProjectConfig& config, std::ostream& out) {
    config.validate();
    const fs::path outdir(config.output_dir);
    if (!fs::exists(outdir / "ranking.json"))
        throw IoError((outdir / "ranking.json").string() +
                      " not found; run the analyze step first");
    if (!fs::exists(outdir / "manifest.json"))
        throw IoError((outdir / "manifest.json").string() +
                      " not found; run the analyze step first");

    const RankingResult ranking = ranking_from_json(csv::read_text(outdir / "ranking.json"));
    const json manifest = read_manifest(outdir / "manifest.json");

    std::map<std::string, std::string> descriptions;
    if (fs::exists(outdir / "catalog.json")) {
        const FeatureCatalog catalog =
            catalog_from_json(csv::read_text(outdir / "catalog.json"));
        for (const FeatureSpec& spec : catalog.specs())
            descriptions[spec.feature_id] = spec.description;
    }

    std::ostringstream text;
    char line[256];
    text << "time-series phenotyping report (tsphen " << kToolVersion << ")\n";
    text << "output directory: " << outdir.string() << "\n\n";

    if (manifest.contains("analyze")) {
        const json& section = manifest["analyze"];
        const auto classes = section.value("classes", std::vector<std::string>{});
        const auto counts = section.value("class_counts", std::vector<std::size_t>{});
        std::size_t total = 0;
        for (std::size_t c : counts) total += c;
        text << "series: " << total << " across " << classes.size() << " classes\n";
        for (std::size_t c = 0; c < classes.size() && c < counts.size(); ++c)
            text << "  " << classes[c] << ": " << counts[c] << "\n";
        const auto n_input = section.value("n_features_input", std::size_t{0});
        const auto n_kept = section.value("n_features_kept", std::size_t{0});
        text << "features: " << n_input << " computed, filtered down to " << n_kept
             << " well-behaved features\n";
    }

    if (fs::exists(outdir / "classification.json")) {
        const ClassifierReport report =
            classifier_report_from_json(csv::read_text(outdir / "classification.json"));
        std::snprintf(line, sizeof(line),
                      "classification: %d-fold cross-validated balanced accuracy %.1f%% "
                      "(chance level: %.1f%%)\n",
                      static_cast<int>(report.fold_balanced_accuracy.size()),
                      100.0 * report.mean_balanced_accuracy, 100.0 * report.chance_level);
        text << line;
    } else {
        std::string reason = "not available";
        if (manifest.contains("analyze") && manifest["analyze"].contains("errors") &&
            manifest["analyze"]["errors"].contains("classify"))
            reason = manifest["analyze"]["errors"]["classify"].get<std::string>();
        text << "classification: " << reason << "\n";
    }

    if (ranking.n_significant == 0) {
        text << "no features significant at q < 0.05\n";
    } else {
        text << "features significant at q < 0.05: " << ranking.n_significant << "\n";
    }

    text << "\ntop features by single-feature balanced accuracy:\n";
    const std::size_t n_top = std::min<std::size_t>(10, ranking.features.size());
    for (std::size_t i = 0; i < n_top; ++i) {
        const FeatureRanking& row = ranking.features[i];
        std::snprintf(line, sizeof(line), "  %2zu. %-28s stat=%.3f  q=%.4g", i + 1,
                      row.feature_id.c_str(), row.observed_stat, row.q_value);
        text << line;
        const auto it = descriptions.find(row.feature_id);
        if (it != descriptions.end() && !it->second.empty()) text << "  -- " << it->second;
        text << "\n";
    }

    csv::write_text_atomic(outdir / "report.txt", text.str());
    out << text.str();
    return 0;
}

}  // namespace tsphen
