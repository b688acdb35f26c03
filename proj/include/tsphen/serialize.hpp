#pragma once

#include <string>

#include "tsphen/featlib.hpp"
#include "tsphen/inference.hpp"
#include "tsphen/learn.hpp"
#include "tsphen/quality.hpp"

namespace tsphen {

// JSON text codecs for every structured artifact the pipeline writes or
// reads back. Encoders emit 2-space-indented JSON with keys in a fixed
// (alphabetical) order so identical inputs always produce identical bytes;
// decoders throw ConfigError on malformed or type-mismatched documents.

/// Catalog file format: a JSON array of feature records. The selected
/// output name travels inside "params" as the one string-valued entry.
std::string catalog_to_json(const FeatureCatalog& catalog);
FeatureCatalog catalog_from_json(const std::string& text);

/// Filtration outcome, including any columns dropped at normalization time
/// for a zero interquartile range (passed separately because they are
/// discovered after filtering proper).
std::string filter_report_to_json(const FilterReport& report,
                                  const std::vector<std::string>& zero_iqr_dropped = {});

std::string ranking_to_json(const RankingResult& ranking);
RankingResult ranking_from_json(const std::string& text);

std::string classifier_report_to_json(const ClassifierReport& report,
                                      const std::vector<std::string>& series_ids = {});
ClassifierReport classifier_report_from_json(const std::string& text);

std::string pca_to_json(const PcaProjection& projection);

std::string correlation_cluster_to_json(const CorrelationCluster& cluster);

}  // namespace tsphen
