#ifndef TERMGRAPH_ML_PREPROCESS_HPP
#define TERMGRAPH_ML_PREPROCESS_HPP

#include "termgraph/ml/matrix.hpp"

#include <vector>

namespace termgraph::ml {

// Column-wise z-score with population standard deviation. Columns with
// zero variance map to 0 and are flagged.
struct Standardizer {
    std::vector<double> means;
    std::vector<double> stds;
    std::vector<bool> zero_variance;

    static Standardizer fit(const Matrix& X);
    Matrix transform(const Matrix& X) const;
};

struct Standardized {
    Matrix X;
    Standardizer params;
};

Standardized standardize(const Matrix& X);

}  // namespace termgraph::ml

#endif
