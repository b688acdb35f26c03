#include "tsphen/serialize.hpp"

#include <algorithm>

#include "json.hpp"

namespace tsphen {

using nlohmann::json;

namespace {

json parse_or_throw(const std::string& text, const char* what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ConfigError(std::string(what) + ": malformed JSON");
    return doc;
}

template <typename T>
T field(const json& obj, const char* key, const char* what) {
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError(std::string(what) + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(what) + ": field '" + key + "' has the wrong type");
    }
}

}  // namespace

std::string catalog_to_json(const FeatureCatalog& catalog) {
    json records = json::array();
    for (const FeatureSpec& spec : catalog.specs()) {
        json params;
        for (const auto& [key, value] : spec.params) params[key] = value;
        params["output"] = spec.output;
        records.push_back({{"feature_id", spec.feature_id},
                           {"family", to_string(spec.family)},
                           {"params", params},
                           {"min_length", spec.min_length},
                           {"description", spec.description}});
    }
    return records.dump(2) + "\n";
}

FeatureCatalog catalog_from_json(const std::string& text) {
    const json doc = parse_or_throw(text, "catalog");
    if (!doc.is_array()) throw ConfigError("catalog: expected a JSON array of features");
    std::vector<FeatureSpec> specs;
    for (const json& record : doc) {
        if (!record.is_object()) throw ConfigError("catalog: feature record is not an object");
        FeatureSpec spec;
        spec.feature_id = field<std::string>(record, "feature_id", "catalog");
        const auto family_name = field<std::string>(record, "family", "catalog");
        const auto family = family_from_string(family_name);
        if (!family) throw ConfigError("catalog: unknown family '" + family_name + "'");
        spec.family = *family;
        spec.min_length = field<std::size_t>(record, "min_length", "catalog");
        spec.description = field<std::string>(record, "description", "catalog");
        const json params = field<json>(record, "params", "catalog");
        if (!params.is_object()) throw ConfigError("catalog: params must be an object");
        for (const auto& [key, value] : params.items()) {
            if (key == "output" && value.is_string()) {
                spec.output = value.get<std::string>();
            } else if (value.is_number()) {
                spec.params[key] = value.get<double>();
            } else {
                throw ConfigError("catalog: param '" + key + "' of '" + spec.feature_id +
                                  "' must be numeric");
            }
        }
        specs.push_back(std::move(spec));
    }
    return FeatureCatalog(std::move(specs));
}

std::string filter_report_to_json(const FilterReport& report,
                                  const std::vector<std::string>& zero_iqr_dropped) {
    json removed = json::array();
    for (const auto& [id, reason] : report.removed)
        removed.push_back({{"feature_id", id}, {"reason", to_string(reason)}});
    for (const auto& id : zero_iqr_dropped)
        removed.push_back({{"feature_id", id}, {"reason", to_string(RemovalReason::ZERO_IQR)}});

    json kept = json::array();
    for (const auto& id : report.kept_feature_ids) {
        if (std::find(zero_iqr_dropped.begin(), zero_iqr_dropped.end(), id) ==
            zero_iqr_dropped.end())
            kept.push_back(id);
    }
    const json doc = {{"kept", kept}, {"removed", removed}};
    return doc.dump(2) + "\n";
}

std::string ranking_to_json(const RankingResult& ranking) {
    json features = json::array();
    for (const FeatureRanking& row : ranking.features) {
        json summaries = json::array();
        for (const ClassSummary& s : row.class_summaries)
            summaries.push_back({{"class", s.class_label},
                                 {"median", s.median},
                                 {"q1", s.q1},
                                 {"q3", s.q3}});
        features.push_back({{"feature_id", row.feature_id},
                            {"observed_stat", row.observed_stat},
                            {"p_value", row.p_value},
                            {"q_value", row.q_value},
                            {"significant", row.significant},
                            {"class_summaries", summaries}});
    }
    const json doc = {{"classes", ranking.classes},
                      {"features", features},
                      {"n_significant", ranking.n_significant},
                      {"q_level", ranking.q_level},
                      {"n_perm", ranking.n_perm},
                      {"seed", ranking.seed}};
    return doc.dump(2) + "\n";
}

RankingResult ranking_from_json(const std::string& text) {
    const json doc = parse_or_throw(text, "ranking");
    RankingResult out;
    out.classes = field<std::vector<std::string>>(doc, "classes", "ranking");
    out.n_significant = field<std::size_t>(doc, "n_significant", "ranking");
    out.q_level = field<double>(doc, "q_level", "ranking");
    out.n_perm = field<int>(doc, "n_perm", "ranking");
    out.seed = field<std::uint64_t>(doc, "seed", "ranking");
    const json features = field<json>(doc, "features", "ranking");
    if (!features.is_array()) throw ConfigError("ranking: features must be an array");
    for (const json& record : features) {
        FeatureRanking row;
        row.feature_id = field<std::string>(record, "feature_id", "ranking");
        row.observed_stat = field<double>(record, "observed_stat", "ranking");
        row.p_value = field<double>(record, "p_value", "ranking");
        row.q_value = field<double>(record, "q_value", "ranking");
        row.significant = field<bool>(record, "significant", "ranking");
        const json summaries = field<json>(record, "class_summaries", "ranking");
        for (const json& s : summaries) {
            ClassSummary summary;
            summary.class_label = field<std::string>(s, "class", "ranking");
            summary.median = field<double>(s, "median", "ranking");
            summary.q1 = field<double>(s, "q1", "ranking");
            summary.q3 = field<double>(s, "q3", "ranking");
            row.class_summaries.push_back(std::move(summary));
        }
        out.features.push_back(std::move(row));
    }
    return out;
}

std::string classifier_report_to_json(const ClassifierReport& report,
                                      const std::vector<std::string>& series_ids) {
    json doc = {{"classes", report.classes},
                {"fold_of", report.fold_of},
                {"predicted", report.predicted},
                {"fold_balanced_accuracy", report.fold_balanced_accuracy},
                {"mean_balanced_accuracy", report.mean_balanced_accuracy},
                {"chance_level", report.chance_level},
                {"confusion", report.confusion},
                {"all_folds_converged", report.all_folds_converged}};
    if (!series_ids.empty()) doc["series_ids"] = series_ids;
    return doc.dump(2) + "\n";
}

ClassifierReport classifier_report_from_json(const std::string& text) {
    const json doc = parse_or_throw(text, "classification");
    ClassifierReport out;
    out.classes = field<std::vector<std::string>>(doc, "classes", "classification");
    out.fold_of = field<std::vector<int>>(doc, "fold_of", "classification");
    out.predicted = field<std::vector<std::string>>(doc, "predicted", "classification");
    out.fold_balanced_accuracy =
        field<std::vector<double>>(doc, "fold_balanced_accuracy", "classification");
    out.mean_balanced_accuracy = field<double>(doc, "mean_balanced_accuracy", "classification");
    out.chance_level = field<double>(doc, "chance_level", "classification");
    out.confusion =
        field<std::vector<std::vector<std::size_t>>>(doc, "confusion", "classification");
    out.all_folds_converged = field<bool>(doc, "all_folds_converged", "classification");
    return out;
}

std::string pca_to_json(const PcaProjection& projection) {
    const json doc = {{"series_ids", projection.series_ids},
                      {"n_components", projection.n_components},
                      {"scores", projection.scores},
                      {"loadings", projection.loadings},
                      {"variance_explained", projection.variance_explained}};
    return doc.dump(2) + "\n";
}

std::string correlation_cluster_to_json(const CorrelationCluster& cluster) {
    const json doc = {{"feature_ids", cluster.feature_ids},
                      {"abs_spearman", cluster.abs_spearman},
                      {"leaf_order", cluster.leaf_order}};
    return doc.dump(2) + "\n";
}

}  // namespace tsphen
