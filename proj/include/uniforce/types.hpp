#pragma once

#include <Eigen/Dense>

namespace uniforce {

// Points are rows: an N x d matrix holds N datapoints in R^d.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexVector = Eigen::VectorXi;

// Squared Euclidean distance from every row of `points` to the row vector `center`.
template <typename DerivedP, typename DerivedC>
Vector squared_distances_to(const Eigen::MatrixBase<DerivedP>& points,
                            const Eigen::MatrixBase<DerivedC>& center) {
    return (points.rowwise() - center).rowwise().squaredNorm();
}

// All pairwise Euclidean distances between rows of `a` (upper triangle useful for graphs).
template <typename Derived>
Matrix pairwise_distances(const Eigen::MatrixBase<Derived>& a) {
    const Eigen::Index n = a.rows();
    Matrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d.row(i) = (a.rowwise() - a.row(i)).rowwise().norm().transpose();
    }
    return d;
}

}  // namespace uniforce
