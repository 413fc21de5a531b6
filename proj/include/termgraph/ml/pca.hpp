#ifndef TERMGRAPH_ML_PCA_HPP
#define TERMGRAPH_ML_PCA_HPP

#include "termgraph/ml/matrix.hpp"

#include <array>
#include <vector>

namespace termgraph::ml {

// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
// Eigenvalues are returned in descending order; column i of `vectors` is
// the unit eigenvector for values[i].
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;
};
SymmetricEigen jacobi_eigen(Matrix A);

struct PcaResult {
    std::array<std::vector<double>, 2> components;  // unit loading vectors
    std::array<double, 2> explained_variance{};
    std::array<double, 2> explained_variance_ratio{};
    double total_variance = 0.0;  // trace of the sample covariance
    Matrix projected;             // rows(X) x 2, X * components
};

// Top two principal components of X (expected standardised) using the
// sample covariance. Works on whichever of the d x d covariance or the
// n x n Gram matrix is smaller. Each component's largest-magnitude loading
// is made positive. Throws std::invalid_argument for fewer than two rows
// or data with zero total variance.
PcaResult pca2(const Matrix& X);

}  // namespace termgraph::ml

#endif
