#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsphen/featlib.hpp"
#include "tsphen/types.hpp"

namespace tsphen {

/// Observed statistic and permutation p-value for one feature column.
struct PermutationOutcome {
    double observed_stat = 0.0;
    double p_value = 1.0;
};

/// Label-shuffling test of a single feature. The statistic is the in-sample
/// balanced accuracy of the nearest-class-mean rule (the single-feature
/// linear discriminant with equal priors). Each permutation draws its
/// shuffle from an independent stream keyed by (seed, feature_index,
/// permutation index), so batches of columns can run in any order or in
/// parallel without changing any p-value. p = (1 + #{perm >= observed}) /
/// (1 + n_perm); ties count toward the numerator.
///
/// Throws std::invalid_argument on size mismatch, non-finite values or
/// n_perm < 1, and DegenerateInputError when there are fewer than two
/// classes or any class has fewer than two members.
PermutationOutcome permutation_test(std::span<const double> feature_column,
                                    std::span<const std::string> labels, int n_perm = 1000,
                                    std::uint64_t seed = 42, std::uint64_t feature_index = 0);

/// Benjamini-Hochberg q-values and the significant set at `q_level`.
struct FdrResult {
    std::vector<double> q_values;
    std::vector<bool> significant;  // q_value <= q_level
};

/// Step-up false-discovery-rate control: with p sorted ascending,
/// q_(i) = min_{j >= i} (n * p_(j) / j), capped at 1. Results are reported
/// in the input order. Throws std::invalid_argument unless every p is in
/// (0, 1] and q_level is in (0, 1].
FdrResult bh_fdr(std::span<const double> p_values, double q_level = 0.05);

/// Quartile summary of one feature within one class (violin-plot data).
struct ClassSummary {
    std::string class_label;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

/// One feature's row in the ranking table.
struct FeatureRanking {
    std::string feature_id;
    std::size_t column_index = 0;  // column in the matrix handed to rank_features
    double observed_stat = 0.0;
    double p_value = 1.0;
    double q_value = 1.0;
    bool significant = false;
    std::vector<ClassSummary> class_summaries;  // one per class, class order
};

/// All features ordered by observed statistic descending (ties broken by
/// feature_id ascending), with global counts.
struct RankingResult {
    std::vector<std::string> classes;
    std::vector<FeatureRanking> features;
    std::size_t n_significant = 0;
    double q_level = 0.05;
    int n_perm = 0;
    std::uint64_t seed = 0;
};

/// Permutation-tests every column of a filtered matrix on its raw values,
/// applies bh_fdr across the columns, and attaches per-class quartile
/// summaries. The matrix must contain only OK cells (filter first); the
/// feature_index used for each column's RNG stream is its column index, so
/// the result is independent of `threads`.
RankingResult rank_features(const FeatureMatrix& matrix, std::span<const std::string> labels,
                            int n_perm = 1000, std::uint64_t seed = 42, double q_level = 0.05,
                            int threads = 1);

/// Correlation structure among the top-ranked features: pairwise |Spearman|
/// and a dendrogram leaf order that places correlated features adjacently.
struct CorrelationCluster {
    std::vector<std::string> feature_ids;            // top_k ids in ranking order
    std::vector<std::vector<double>> abs_spearman;   // k x k, unit diagonal
    std::vector<std::size_t> leaf_order;             // permutation of 0..k-1
};

/// Takes the first `top_k` entries of `ranking`, computes |Spearman rho|
/// between their raw columns (average ranks on ties), and orders the leaves
/// by average-linkage agglomeration on distance 1 - |rho|. Merge ties pick
/// the lexicographically smallest cluster pair; each merge lists the child
/// containing the smaller original leaf first. Throws std::invalid_argument
/// when top_k is 0, exceeds the ranking, or names a feature absent from the
/// matrix, and DegenerateInputError when a selected column is constant.
CorrelationCluster correlation_cluster(const FeatureMatrix& matrix, const RankingResult& ranking,
                                       std::size_t top_k = 40);

}  // namespace tsphen
