#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsphen/quality.hpp"
#include "tsphen/types.hpp"

namespace tsphen {

/// Mean over classes of the per-class recall t_i / c_i. Throws
/// MissingClassError when some class in `classes` has no actual example.
double balanced_accuracy(std::span<const std::string> predicted,
                         std::span<const std::string> actual,
                         std::span<const std::string> classes);

/// One-dimensional linear discriminant with equal priors and pooled
/// within-class variance: predict the class whose mean is nearest; ties go
/// to the earlier class in sorted class order. Throws DegenerateInputError
/// when the pooled within-class variance is zero.
std::vector<std::string> lda_single_feature(std::span<const double> train_values,
                                            std::span<const std::string> train_labels,
                                            std::span<const double> test_values);

/// Nearest-class-mean prediction without the variance precondition: when
/// every class mean coincides (e.g. a constant feature) every test point
/// ties and maps to the first class. This is the statistic core shared with
/// the permutation test, where degenerate columns must yield chance-level
/// scores rather than errors.
std::vector<std::string> nearest_mean_classify(std::span<const double> train_values,
                                               std::span<const std::string> train_labels,
                                               std::span<const double> test_values);

/// One-vs-rest linear classifier with per-class weight vectors and biases.
struct LinearModel {
    std::vector<std::string> classes;            // sorted; score order
    std::vector<std::vector<double>> weights;    // [class][feature]
    std::vector<double> bias;                    // [class]
    bool converged = true;                       // every one-vs-rest fit met tolerance
    std::size_t total_iterations = 0;
    double final_loss = 0.0;                     // summed over classes

    /// argmax of per-class scores; ties by class order.
    std::string predict(std::span<const double> features) const;
};

/// Weighted L2-regularized logistic loss of one one-vs-rest subproblem and
/// its gradient; exposed so the gradient can be checked against finite
/// differences.
struct WeightedLogisticObjective {
    const NormalizedMatrix* matrix = nullptr;
    std::vector<double> targets;       // +-1 per row
    std::vector<double> row_weights;   // N / (m * c_i) per row
    double regularization = 0.01;

    /// params = [w_0..w_{p-1}, b]; the bias is not regularized.
    double loss(std::span<const double> params) const;
    std::vector<double> gradient(std::span<const double> params) const;
};

/// Trains the one-vs-rest model by deterministic full-batch gradient
/// descent with Armijo backtracking; stops each subproblem at relative loss
/// change < 1e-6 or after `max_iterations`. A budget overrun flags
/// converged = false but still returns the model. The seed parameter is
/// accepted for interface stability and unused: optimization starts from
/// zero and is fully deterministic.
LinearModel fit_weighted_linear(const NormalizedMatrix& train,
                                std::span<const std::string> train_labels,
                                double regularization = 0.01, std::uint64_t seed = 42,
                                std::size_t max_iterations = 5000);

/// Deterministic stratified fold assignment: within each class, members are
/// shuffled by a per-class stream derived from the seed and dealt
/// round-robin to folds 0..k-1.
struct FoldAssignment {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<int> fold_of;  // per labeled row
};

/// Throws ClassTooSmallError (naming the class) when any class has fewer
/// than k members.
FoldAssignment stratified_kfold(std::span<const std::string> labels, int k,
                                std::uint64_t seed);

/// Cross-validation outcome; predictions align with input row order.
struct ClassifierReport {
    std::vector<std::string> classes;
    std::vector<int> fold_of;
    std::vector<std::string> predicted;
    std::vector<double> fold_balanced_accuracy;
    double mean_balanced_accuracy = 0.0;
    double chance_level = 0.0;                    // 1 / number of classes
    std::vector<std::vector<std::size_t>> confusion;  // [actual][predicted]
    bool all_folds_converged = true;
};

/// k-fold stratified cross-validation of the weighted linear classifier.
ClassifierReport cross_validate(const NormalizedMatrix& matrix,
                                std::span<const std::string> labels, int k = 10,
                                double regularization = 0.01, std::uint64_t seed = 42);

/// Principal component projection of the (column-mean-centered) matrix.
struct PcaProjection {
    std::vector<std::string> series_ids;
    std::size_t n_components = 0;
    std::vector<std::vector<double>> scores;    // [series][component]
    std::vector<std::vector<double>> loadings;  // [component][feature]
    std::vector<double> variance_explained;     // fraction per component
};

/// Scores/loadings from the thin SVD of the centered matrix. Sign
/// convention: each loading's largest-magnitude entry is positive. Throws
/// RankDeficientError when fewer than n_components singular values exceed
/// 1e-10 relative to the largest.
PcaProjection pca(const NormalizedMatrix& matrix, int n_components = 2);

}  // namespace tsphen
