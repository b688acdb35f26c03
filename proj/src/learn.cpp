#include "tsphen/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "tsphen/rng.hpp"

namespace tsphen {

double balanced_accuracy(std::span<const std::string> predicted,
                         std::span<const std::string> actual,
                         std::span<const std::string> classes) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("balanced_accuracy: length mismatch");
    if (classes.empty()) throw std::invalid_argument("balanced_accuracy: no classes");

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < classes.size(); ++i) index[classes[i]] = i;

    std::vector<std::size_t> correct(classes.size(), 0), count(classes.size(), 0);
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const auto it = index.find(actual[i]);
        if (it == index.end())
            throw std::invalid_argument("balanced_accuracy: actual label '" + actual[i] +
                                        "' not in class list");
        ++count[it->second];
        if (predicted[i] == actual[i]) ++correct[it->second];
    }
    double acc = 0.0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (count[c] == 0)
            throw MissingClassError("balanced_accuracy: class '" + classes[c] +
                                    "' has no actual examples");
        acc += static_cast<double>(correct[c]) / static_cast<double>(count[c]);
    }
    return acc / static_cast<double>(classes.size());
}

namespace {

struct ClassMeans {
    std::vector<std::string> classes;  // sorted
    std::vector<double> means;
    std::vector<std::size_t> counts;
};

ClassMeans class_means(std::span<const double> values,
                       std::span<const std::string> labels) {
    if (values.size() != labels.size())
        throw std::invalid_argument("classify: values/labels length mismatch");
    if (values.empty()) throw std::invalid_argument("classify: empty training set");

    ClassMeans out;
    out.classes = class_list(labels);
    out.means.assign(out.classes.size(), 0.0);
    out.counts.assign(out.classes.size(), 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto c = static_cast<std::size_t>(
            std::lower_bound(out.classes.begin(), out.classes.end(), labels[i]) -
            out.classes.begin());
        out.means[c] += values[i];
        ++out.counts[c];
    }
    for (std::size_t c = 0; c < out.classes.size(); ++c)
        out.means[c] /= static_cast<double>(out.counts[c]);
    return out;
}

std::vector<std::string> predict_nearest_mean(const ClassMeans& cm,
                                              std::span<const double> test_values) {
    std::vector<std::string> out;
    out.reserve(test_values.size());
    for (const double x : test_values) {
        std::size_t best = 0;
        double best_dist = std::abs(x - cm.means[0]);
        for (std::size_t c = 1; c < cm.classes.size(); ++c) {
            const double d = std::abs(x - cm.means[c]);
            if (d < best_dist) {  // strict: ties keep the earlier class
                best_dist = d;
                best = c;
            }
        }
        out.push_back(cm.classes[best]);
    }
    return out;
}

}  // namespace

std::vector<std::string> nearest_mean_classify(std::span<const double> train_values,
                                               std::span<const std::string> train_labels,
                                               std::span<const double> test_values) {
    return predict_nearest_mean(class_means(train_values, train_labels), test_values);
}

std::vector<std::string> lda_single_feature(std::span<const double> train_values,
                                            std::span<const std::string> train_labels,
                                            std::span<const double> test_values) {
    const auto cm = class_means(train_values, train_labels);
    if (cm.classes.size() < 2)
        throw std::invalid_argument("lda_single_feature: need >= 2 classes");

    // pooled within-class variance; with equal priors and a shared variance
    // the discriminant argmax reduces to the nearest class mean
    double pooled = 0.0;
    for (std::size_t i = 0; i < train_values.size(); ++i) {
        const auto c = static_cast<std::size_t>(
            std::lower_bound(cm.classes.begin(), cm.classes.end(), train_labels[i]) -
            cm.classes.begin());
        const double d = train_values[i] - cm.means[c];
        pooled += d * d;
    }
    if (pooled <= 0.0)
        throw DegenerateInputError("lda_single_feature: pooled within-class variance is 0");
    return predict_nearest_mean(cm, test_values);
}

// ---------------------------------------------------------------------------
// Weighted linear classifier
// ---------------------------------------------------------------------------

double WeightedLogisticObjective::loss(std::span<const double> params) const {
    const std::size_t p = matrix->cols();
    const std::size_t n = matrix->rows();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double margin = params[p];
        for (std::size_t j = 0; j < p; ++j) margin += params[j] * matrix->value(i, j);
        const double ym = targets[i] * margin;
        // log(1 + exp(-ym)) evaluated stably on both tails
        const double nll = ym > 0.0 ? std::log1p(std::exp(-ym)) : -ym + std::log1p(std::exp(ym));
        total += row_weights[i] * nll;
    }
    total /= static_cast<double>(n);
    double reg = 0.0;
    for (std::size_t j = 0; j < p; ++j) reg += params[j] * params[j];
    return total + 0.5 * regularization * reg;
}

std::vector<double> WeightedLogisticObjective::gradient(std::span<const double> params) const {
    const std::size_t p = matrix->cols();
    const std::size_t n = matrix->rows();
    std::vector<double> grad(p + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double margin = params[p];
        for (std::size_t j = 0; j < p; ++j) margin += params[j] * matrix->value(i, j);
        const double ym = targets[i] * margin;
        // d/d margin of log(1+exp(-y margin)) = -y sigma(-y margin)
        const double sig = 1.0 / (1.0 + std::exp(ym));
        const double coeff = row_weights[i] * -targets[i] * sig;
        for (std::size_t j = 0; j < p; ++j) grad[j] += coeff * matrix->value(i, j);
        grad[p] += coeff;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& g : grad) g *= inv_n;
    for (std::size_t j = 0; j < p; ++j) grad[j] += regularization * params[j];
    return grad;
}

namespace {

struct SubFit {
    std::vector<double> params;
    bool converged = false;
    std::size_t iterations = 0;
    double loss = 0.0;
};

// Full-batch gradient descent with Armijo backtracking. Deterministic: no
// randomness anywhere, fixed initial point and step policy.
SubFit minimize(const WeightedLogisticObjective& objective, std::size_t dim,
                std::size_t max_iterations) {
    SubFit fit;
    fit.params.assign(dim, 0.0);
    double loss = objective.loss(fit.params);
    double step = 1.0;

    for (std::size_t it = 0; it < max_iterations; ++it) {
        const auto grad = objective.gradient(fit.params);
        double grad_sq = 0.0;
        for (double g : grad) grad_sq += g * g;
        if (grad_sq == 0.0) {
            fit.converged = true;
            fit.iterations = it;
            break;
        }

        // Armijo: shrink until f(x - s g) <= f(x) - 1e-4 s |g|^2
        step = std::min(step * 2.0, 1e6);
        std::vector<double> candidate(dim);
        double new_loss = loss;
        bool accepted = false;
        for (int half = 0; half < 60; ++half) {
            for (std::size_t j = 0; j < dim; ++j)
                candidate[j] = fit.params[j] - step * grad[j];
            new_loss = objective.loss(candidate);
            if (new_loss <= loss - 1e-4 * step * grad_sq) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // no descent step found at any scale: numerically converged
            fit.converged = true;
            fit.iterations = it;
            break;
        }
        fit.params = candidate;
        const double rel_change = std::abs(loss - new_loss) / std::max(1e-300, std::abs(loss));
        loss = new_loss;
        fit.iterations = it + 1;
        if (rel_change < 1e-6) {
            fit.converged = true;
            break;
        }
    }
    fit.loss = loss;
    return fit;
}

}  // namespace

std::string LinearModel::predict(std::span<const double> features) const {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        double score = bias[c];
        for (std::size_t j = 0; j < features.size(); ++j) score += weights[c][j] * features[j];
        if (score > best_score) {  // strict: ties keep the earlier class
            best_score = score;
            best = c;
        }
    }
    return classes[best];
}

LinearModel fit_weighted_linear(const NormalizedMatrix& train,
                                std::span<const std::string> train_labels,
                                double regularization, std::uint64_t seed,
                                std::size_t max_iterations) {
    (void)seed;  // deterministic fit; parameter kept for interface stability
    if (train.rows() != train_labels.size())
        throw std::invalid_argument("fit_weighted_linear: rows/labels mismatch");
    if (train.rows() == 0) throw std::invalid_argument("fit_weighted_linear: empty input");
    if (regularization < 0.0)
        throw std::invalid_argument("fit_weighted_linear: negative regularization");

    LinearModel model;
    model.classes = class_list(train_labels);
    if (model.classes.size() < 2)
        throw std::invalid_argument("fit_weighted_linear: need >= 2 classes");

    const std::size_t n = train.rows();
    const std::size_t m = model.classes.size();
    std::vector<std::size_t> class_of(n);
    std::vector<std::size_t> counts(m, 0);
    for (std::size_t i = 0; i < n; ++i) {
        class_of[i] = static_cast<std::size_t>(
            std::lower_bound(model.classes.begin(), model.classes.end(), train_labels[i]) -
            model.classes.begin());
        ++counts[class_of[i]];
    }

    // inverse-probability observation weights: N / (m c_i)
    std::vector<double> row_weights(n);
    for (std::size_t i = 0; i < n; ++i)
        row_weights[i] = static_cast<double>(n) /
                         (static_cast<double>(m) * static_cast<double>(counts[class_of[i]]));

    const std::size_t p = train.cols();
    for (std::size_t c = 0; c < m; ++c) {
        WeightedLogisticObjective objective;
        objective.matrix = &train;
        objective.row_weights = row_weights;
        objective.regularization = regularization;
        objective.targets.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            objective.targets[i] = class_of[i] == c ? 1.0 : -1.0;

        const auto fit = minimize(objective, p + 1, max_iterations);
        model.weights.emplace_back(fit.params.begin(),
                                   fit.params.begin() + static_cast<long>(p));
        model.bias.push_back(fit.params[p]);
        model.converged = model.converged && fit.converged;
        model.total_iterations += fit.iterations;
        model.final_loss += fit.loss;
    }
    return model;
}

// ---------------------------------------------------------------------------
// Stratified folds and cross-validation
// ---------------------------------------------------------------------------

FoldAssignment stratified_kfold(std::span<const std::string> labels, int k,
                                std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    if (labels.empty()) throw std::invalid_argument("stratified_kfold: empty labels");

    const auto classes = class_list(labels);
    FoldAssignment assignment;
    assignment.k = k;
    assignment.seed = seed;
    assignment.fold_of.assign(labels.size(), -1);

    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == classes[c]) members.push_back(i);
        if (members.size() < static_cast<std::size_t>(k))
            throw ClassTooSmallError("stratified_kfold: class '" + classes[c] + "' has " +
                                     std::to_string(members.size()) + " members, need >= " +
                                     std::to_string(k));
        rng::SplitMix64 gen(rng::mix({seed, static_cast<std::uint64_t>(c)}));
        rng::shuffle(std::span<std::size_t>(members), gen);
        for (std::size_t j = 0; j < members.size(); ++j)
            assignment.fold_of[members[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
    }
    return assignment;
}

ClassifierReport cross_validate(const NormalizedMatrix& matrix,
                                std::span<const std::string> labels, int k,
                                double regularization, std::uint64_t seed) {
    if (matrix.rows() != labels.size())
        throw std::invalid_argument("cross_validate: rows/labels mismatch");

    const auto assignment = stratified_kfold(labels, k, seed);
    const auto classes = class_list(labels);

    ClassifierReport report;
    report.classes = classes;
    report.fold_of = assignment.fold_of;
    report.predicted.assign(matrix.rows(), "");
    report.chance_level = 1.0 / static_cast<double>(classes.size());
    report.confusion.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));

    for (int fold = 0; fold < k; ++fold) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < matrix.rows(); ++i)
            (assignment.fold_of[i] == fold ? test_rows : train_rows).push_back(i);

        NormalizedMatrix train;
        train.feature_ids = matrix.feature_ids;
        std::vector<std::string> train_labels;
        for (const auto r : train_rows) {
            train.series_ids.push_back(matrix.series_ids[r]);
            const auto row = matrix.row(r);
            train.values.insert(train.values.end(), row.begin(), row.end());
            train_labels.push_back(labels[r]);
        }

        const auto model =
            fit_weighted_linear(train, train_labels, regularization, seed);
        report.all_folds_converged = report.all_folds_converged && model.converged;

        std::vector<std::string> fold_pred, fold_actual;
        for (const auto r : test_rows) {
            const auto pred = model.predict(matrix.row(r));
            report.predicted[r] = pred;
            fold_pred.push_back(pred);
            fold_actual.push_back(labels[r]);
        }
        report.fold_balanced_accuracy.push_back(
            balanced_accuracy(fold_pred, fold_actual, classes));
    }

    double total = 0.0;
    for (const double a : report.fold_balanced_accuracy) total += a;
    report.mean_balanced_accuracy = total / static_cast<double>(k);

    const auto class_index = [&](const std::string& label) {
        return static_cast<std::size_t>(
            std::lower_bound(classes.begin(), classes.end(), label) - classes.begin());
    };
    for (std::size_t i = 0; i < matrix.rows(); ++i)
        ++report.confusion[class_index(labels[i])][class_index(report.predicted[i])];
    return report;
}

}  // namespace tsphen
