#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "tsphen/learn.hpp"

namespace tsphen {

PcaProjection pca(const NormalizedMatrix& matrix, int n_components) {
    if (n_components < 1) throw std::invalid_argument("pca: n_components must be >= 1");
    const std::size_t n = matrix.rows();
    const std::size_t p = matrix.cols();
    const auto k = static_cast<std::size_t>(n_components);
    if (n < 2) throw std::invalid_argument("pca: need >= 2 rows");
    if (p < k) throw std::invalid_argument("pca: need >= n_components columns");

    Eigen::MatrixXd centered(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += matrix.value(i, j);
        mu /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            centered(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                matrix.value(i, j) - mu;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& singular = svd.singularValues();

    const double sigma_max = singular.size() > 0 ? singular(0) : 0.0;
    std::size_t effective_rank = 0;
    for (Eigen::Index i = 0; i < singular.size(); ++i)
        if (singular(i) > 1e-10 * sigma_max) ++effective_rank;
    if (effective_rank < k)
        throw RankDeficientError("pca: only " + std::to_string(effective_rank) +
                                 " nonzero singular values, need " + std::to_string(k));

    double total_var = 0.0;
    for (Eigen::Index i = 0; i < singular.size(); ++i) total_var += singular(i) * singular(i);

    PcaProjection out;
    out.series_ids = matrix.series_ids;
    out.n_components = k;

    Eigen::MatrixXd loadings = svd.matrixV().leftCols(static_cast<Eigen::Index>(k));
    // sign convention: the largest-magnitude entry of each loading is positive
    for (std::size_t c = 0; c < k; ++c) {
        Eigen::Index arg = 0;
        loadings.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff(&arg);
        if (loadings(arg, static_cast<Eigen::Index>(c)) < 0.0)
            loadings.col(static_cast<Eigen::Index>(c)) *= -1.0;
    }
    const Eigen::MatrixXd scores = centered * loadings;

    for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> vec(p);
        for (std::size_t j = 0; j < p; ++j)
            vec[j] = loadings(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
        out.loadings.push_back(std::move(vec));
        const double s = singular(static_cast<Eigen::Index>(c));
        out.variance_explained.push_back(total_var > 0.0 ? s * s / total_var : 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(k);
        for (std::size_t c = 0; c < k; ++c)
            row[c] = scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        out.scores.push_back(std::move(row));
    }
    return out;
}

}  // namespace tsphen
