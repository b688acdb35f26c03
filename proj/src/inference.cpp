#include "tsphen/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "tsphen/learn.hpp"
#include "tsphen/rng.hpp"
#include "tsphen/stats.hpp"

namespace tsphen {

namespace {

double in_sample_stat(std::span<const double> column, std::span<const std::string> labels,
                      std::span<const std::string> classes) {
    const auto predicted = nearest_mean_classify(column, labels, column);
    return balanced_accuracy(predicted, labels, classes);
}

void require_testable_classes(std::span<const std::string> labels,
                              const std::vector<std::string>& classes) {
    if (classes.size() < 2) throw DegenerateInputError("permutation test: need >= 2 classes");
    for (const auto& cls : classes) {
        const auto count = std::count(labels.begin(), labels.end(), cls);
        if (count < 2)
            throw DegenerateInputError("permutation test: class '" + cls +
                                       "' has fewer than 2 members");
    }
}

}  // namespace

PermutationOutcome permutation_test(std::span<const double> feature_column,
                                    std::span<const std::string> labels, int n_perm,
                                    std::uint64_t seed, std::uint64_t feature_index) {
    if (feature_column.size() != labels.size())
        throw std::invalid_argument("permutation_test: column and labels differ in length");
    if (feature_column.empty()) throw std::invalid_argument("permutation_test: empty input");
    if (!stats::all_finite(feature_column))
        throw std::invalid_argument("permutation_test: feature column has non-finite values");
    if (n_perm < 1) throw std::invalid_argument("permutation_test: n_perm must be >= 1");

    const std::vector<std::string> label_vec(labels.begin(), labels.end());
    const auto classes = class_list(label_vec);
    require_testable_classes(labels, classes);

    PermutationOutcome out;
    out.observed_stat = in_sample_stat(feature_column, labels, classes);

    int at_least = 0;
    std::vector<std::string> shuffled(labels.begin(), labels.end());
    for (int perm = 0; perm < n_perm; ++perm) {
        std::copy(labels.begin(), labels.end(), shuffled.begin());
        rng::SplitMix64 gen(
            rng::mix({seed, feature_index, static_cast<std::uint64_t>(perm)}));
        rng::shuffle(std::span<std::string>(shuffled), gen);
        const double stat = in_sample_stat(feature_column, shuffled, classes);
        if (stat >= out.observed_stat) ++at_least;
    }
    out.p_value = static_cast<double>(1 + at_least) / static_cast<double>(1 + n_perm);
    return out;
}

FdrResult bh_fdr(std::span<const double> p_values, double q_level) {
    if (!(q_level > 0.0 && q_level <= 1.0))
        throw std::invalid_argument("bh_fdr: q_level must be in (0, 1]");
    for (double p : p_values)
        if (!(p > 0.0 && p <= 1.0))
            throw std::invalid_argument("bh_fdr: p-values must be in (0, 1]");

    const std::size_t n = p_values.size();
    FdrResult out;
    out.q_values.resize(n);
    out.significant.resize(n);
    if (n == 0) return out;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    double running = 1.0;
    for (std::size_t i = n; i-- > 0;) {
        const double adjusted =
            static_cast<double>(n) * p_values[order[i]] / static_cast<double>(i + 1);
        running = std::min(running, adjusted);
        out.q_values[order[i]] = running;
    }
    for (std::size_t i = 0; i < n; ++i) out.significant[i] = out.q_values[i] <= q_level;
    return out;
}

RankingResult rank_features(const FeatureMatrix& matrix, std::span<const std::string> labels,
                            int n_perm, std::uint64_t seed, double q_level, int threads) {
    if (matrix.rows() == 0 || matrix.cols() == 0)
        throw std::invalid_argument("rank_features: empty matrix");
    if (labels.size() != matrix.rows())
        throw std::invalid_argument("rank_features: one label per matrix row required");
    if (threads < 1) throw std::invalid_argument("rank_features: threads must be >= 1");
    for (QualityCode code : matrix.quality)
        if (code != QualityCode::OK)
            throw std::invalid_argument("rank_features: matrix has special cells; filter first");

    const std::vector<std::string> label_vec(labels.begin(), labels.end());
    const auto classes = class_list(label_vec);
    require_testable_classes(labels, classes);

    const std::size_t n_cols = matrix.cols();
    std::vector<PermutationOutcome> outcomes(n_cols);

    const auto test_column = [&](std::size_t col) {
        outcomes[col] = permutation_test(matrix.column(col), labels, n_perm, seed,
                                         static_cast<std::uint64_t>(col));
    };
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), n_cols);
    if (n_workers <= 1) {
        for (std::size_t col = 0; col < n_cols; ++col) test_column(col);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t col = next.fetch_add(1); col < n_cols;
                     col = next.fetch_add(1))
                    test_column(col);
            });
        for (auto& t : pool) t.join();
    }

    std::vector<double> p_values(n_cols);
    for (std::size_t col = 0; col < n_cols; ++col) p_values[col] = outcomes[col].p_value;
    const auto fdr = bh_fdr(p_values, q_level);

    // per-class row indices, then per-column quartiles in class order
    std::vector<std::vector<std::size_t>> members(classes.size());
    for (std::size_t row = 0; row < labels.size(); ++row) {
        const auto it = std::lower_bound(classes.begin(), classes.end(), labels[row]);
        members[static_cast<std::size_t>(it - classes.begin())].push_back(row);
    }

    RankingResult result;
    result.classes = classes;
    result.q_level = q_level;
    result.n_perm = n_perm;
    result.seed = seed;
    result.features.resize(n_cols);
    for (std::size_t col = 0; col < n_cols; ++col) {
        FeatureRanking& row = result.features[col];
        row.feature_id = matrix.feature_ids[col];
        row.column_index = col;
        row.observed_stat = outcomes[col].observed_stat;
        row.p_value = outcomes[col].p_value;
        row.q_value = fdr.q_values[col];
        row.significant = fdr.significant[col];
        row.class_summaries.reserve(classes.size());
        for (std::size_t c = 0; c < classes.size(); ++c) {
            std::vector<double> vals;
            vals.reserve(members[c].size());
            for (std::size_t r : members[c]) vals.push_back(matrix.value(r, col));
            std::sort(vals.begin(), vals.end());
            ClassSummary summary;
            summary.class_label = classes[c];
            summary.median = stats::quantile_sorted(vals, 0.5);
            summary.q1 = stats::quantile_sorted(vals, 0.25);
            summary.q3 = stats::quantile_sorted(vals, 0.75);
            row.class_summaries.push_back(std::move(summary));
        }
    }

    std::sort(result.features.begin(), result.features.end(),
              [](const FeatureRanking& a, const FeatureRanking& b) {
                  if (a.observed_stat != b.observed_stat) return a.observed_stat > b.observed_stat;
                  return a.feature_id < b.feature_id;
              });
    result.n_significant = static_cast<std::size_t>(
        std::count(fdr.significant.begin(), fdr.significant.end(), true));
    return result;
}

CorrelationCluster correlation_cluster(const FeatureMatrix& matrix, const RankingResult& ranking,
                                       std::size_t top_k) {
    if (top_k < 1) throw std::invalid_argument("correlation_cluster: top_k must be >= 1");
    if (top_k > ranking.features.size())
        throw std::invalid_argument("correlation_cluster: top_k exceeds ranked feature count");

    CorrelationCluster out;
    std::vector<std::vector<double>> columns;
    columns.reserve(top_k);
    for (std::size_t i = 0; i < top_k; ++i) {
        const std::string& id = ranking.features[i].feature_id;
        const auto it = std::find(matrix.feature_ids.begin(), matrix.feature_ids.end(), id);
        if (it == matrix.feature_ids.end())
            throw std::invalid_argument("correlation_cluster: feature '" + id +
                                        "' not in matrix");
        auto col = matrix.column(static_cast<std::size_t>(it - matrix.feature_ids.begin()));
        if (stats::is_constant(col))
            throw DegenerateInputError("correlation_cluster: column '" + id + "' is constant");
        out.feature_ids.push_back(id);
        columns.push_back(std::move(col));
    }

    out.abs_spearman.assign(top_k, std::vector<double>(top_k, 1.0));
    for (std::size_t i = 0; i < top_k; ++i)
        for (std::size_t j = i + 1; j < top_k; ++j) {
            const double rho = std::clamp(
                std::abs(stats::spearman(columns[i], columns[j])), 0.0, 1.0);
            out.abs_spearman[i][j] = rho;
            out.abs_spearman[j][i] = rho;
        }

    if (top_k == 1) {
        out.leaf_order = {0};
        return out;
    }

    // average-linkage agglomeration over slots 0..2k-2 (k leaves + k-1 merges)
    const std::size_t n_slots = 2 * top_k - 1;
    std::vector<std::vector<double>> dist(n_slots, std::vector<double>(n_slots, 0.0));
    for (std::size_t i = 0; i < top_k; ++i)
        for (std::size_t j = 0; j < top_k; ++j)
            if (i != j) dist[i][j] = std::max(0.0, 1.0 - out.abs_spearman[i][j]);

    struct ClusterNode {
        std::vector<std::size_t> leaves;  // dendrogram order
        std::size_t min_leaf = 0;
        std::size_t size = 0;
    };
    std::vector<ClusterNode> nodes(n_slots);
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < top_k; ++i) {
        nodes[i] = {{i}, i, 1};
        active.push_back(i);
    }

    std::size_t next_slot = top_k;
    while (active.size() > 1) {
        std::size_t best_a = 0, best_b = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < active.size(); ++a)
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                const double d = dist[active[a]][active[b]];
                if (d < best) {
                    best = d;
                    best_a = a;
                    best_b = b;
                }
            }
        const std::size_t i = active[best_a];
        const std::size_t j = active[best_b];
        ClusterNode& merged = nodes[next_slot];
        const ClusterNode& first = nodes[i].min_leaf <= nodes[j].min_leaf ? nodes[i] : nodes[j];
        const ClusterNode& second = nodes[i].min_leaf <= nodes[j].min_leaf ? nodes[j] : nodes[i];
        merged.leaves = first.leaves;
        merged.leaves.insert(merged.leaves.end(), second.leaves.begin(), second.leaves.end());
        merged.min_leaf = first.min_leaf;
        merged.size = nodes[i].size + nodes[j].size;

        for (std::size_t t : active) {
            if (t == i || t == j) continue;
            const double d = (static_cast<double>(nodes[i].size) * dist[i][t] +
                              static_cast<double>(nodes[j].size) * dist[j][t]) /
                             static_cast<double>(merged.size);
            dist[next_slot][t] = d;
            dist[t][next_slot] = d;
        }
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_a));
        active.push_back(next_slot);
        ++next_slot;
    }
    out.leaf_order = nodes[active.front()].leaves;
    return out;
}

}  // namespace tsphen
