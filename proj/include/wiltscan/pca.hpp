#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "wiltscan/error.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

struct PcaBasis {
    std::vector<double> mean;                        // column means
    std::vector<std::vector<double>> components;     // orthonormal, row per component
    std::vector<double> explained_variance_ratios;   // non-increasing, sums to <= 1
};

struct PcaResult {
    FeatureMatrix reduced;
    PcaBasis basis;
};

// Mean-centers the matrix, takes its SVD, and keeps the smallest prefix of
// components whose cumulative explained variance reaches variance_target.
// Component signs are fixed so the largest-magnitude loading is positive.
inline PcaResult pca_reduce(const FeatureMatrix& features, double variance_target) {
    features.validate();
    if (features.rows < 2) throw DataError("pca_reduce: need at least 2 rows");
    if (!(variance_target > 0.0 && variance_target <= 1.0))
        throw ConfigError("pca_reduce: variance_target must be in (0, 1]");

    const std::size_t n = features.rows, d = features.cols();
    Eigen::MatrixXd x(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = features.at(r, c);
    Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;

    double total_var = x.squaredNorm() / static_cast<double>(n - 1);
    if (total_var <= 1e-300) throw DataError("pca_reduce: matrix has zero variance");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Eigen::MatrixXd v = svd.matrixV(); // d x rank columns

    std::size_t rank = static_cast<std::size_t>(sv.size());
    std::vector<double> ratios(rank);
    for (std::size_t i = 0; i < rank; ++i)
        ratios[i] = sv(static_cast<Eigen::Index>(i)) * sv(static_cast<Eigen::Index>(i)) /
                    static_cast<double>(n - 1) / total_var;

    std::size_t keep = rank;
    double cum = 0;
    for (std::size_t i = 0; i < rank; ++i) {
        cum += ratios[i];
        if (cum >= variance_target - 1e-12) {
            keep = i + 1;
            break;
        }
    }

    // deterministic sign convention
    for (std::size_t i = 0; i < keep; ++i) {
        Eigen::Index col = static_cast<Eigen::Index>(i);
        Eigen::Index argmax = 0;
        v.col(col).cwiseAbs().maxCoeff(&argmax);
        if (v(argmax, col) < 0) v.col(col) = -v.col(col);
    }

    PcaResult out;
    out.basis.mean.assign(mean.data(), mean.data() + d);
    out.basis.explained_variance_ratios.assign(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(keep));
    out.basis.components.resize(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        out.basis.components[i].resize(d);
        for (std::size_t c = 0; c < d; ++c)
            out.basis.components[i][c] = v(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i));
    }

    Eigen::MatrixXd projected = x * v.leftCols(static_cast<Eigen::Index>(keep));
    out.reduced.rows = n;
    out.reduced.names.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.reduced.names.push_back("pc" + std::to_string(i + 1));
    out.reduced.data.resize(n * keep);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < keep; ++c)
            out.reduced.data[r * keep + c] = projected(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

// Maps reduced rows back to the original feature space.
inline FeatureMatrix pca_reconstruct(const FeatureMatrix& reduced, const PcaBasis& basis) {
    const std::size_t n = reduced.rows, k = reduced.cols(), d = basis.mean.size();
    if (k != basis.components.size()) throw DataError("pca_reconstruct: component count mismatch");
    FeatureMatrix out;
    out.rows = n;
    out.names.resize(d);
    for (std::size_t c = 0; c < d; ++c) out.names[c] = "x" + std::to_string(c);
    out.data.assign(n * d, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            double v = basis.mean[c];
            for (std::size_t i = 0; i < k; ++i) v += reduced.at(r, i) * basis.components[i][c];
            out.data[r * d + c] = v;
        }
    return out;
}

} // namespace wiltscan
