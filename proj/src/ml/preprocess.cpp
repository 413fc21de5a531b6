#include "termgraph/ml/preprocess.hpp"

#include <stdexcept>

#include <cmath>

namespace termgraph::ml {

Standardizer Standardizer::fit(const Matrix& X) {
    const std::size_t n = X.rows(), d = X.cols();
    Standardizer s;
    s.means.assign(d, 0.0);
    s.stds.assign(d, 0.0);
    s.zero_variance.assign(d, false);
    if (n == 0) {
        s.zero_variance.assign(d, true);
        return s;
    }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) s.means[c] += X(r, c);
    for (std::size_t c = 0; c < d; ++c) s.means[c] /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            double z = X(r, c) - s.means[c];
            s.stds[c] += z * z;
        }
    for (std::size_t c = 0; c < d; ++c) {
        s.stds[c] = std::sqrt(s.stds[c] / static_cast<double>(n));
        // Relative cut-off so columns that are constant up to rounding count as constant.
        if (!(s.stds[c] > 1e-12 * std::max(1.0, std::abs(s.means[c])))) s.zero_variance[c] = true;
    }
    return s;
}

Matrix Standardizer::transform(const Matrix& X) const {
    if (X.cols() != means.size()) throw std::invalid_argument("Standardizer: column count does not match fit");
    Matrix out(X.rows(), X.cols());
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c)
            out(r, c) = zero_variance[c] ? 0.0 : (X(r, c) - means[c]) / stds[c];
    return out;
}

Standardized standardize(const Matrix& X) {
    Standardized out;
    out.params = Standardizer::fit(X);
    out.X = out.params.transform(X);
    return out;
}

}  // namespace termgraph::ml
