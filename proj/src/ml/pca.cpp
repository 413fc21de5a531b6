#include "termgraph/ml/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace termgraph::ml {

SymmetricEigen jacobi_eigen(Matrix A) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("jacobi_eigen: matrix not square");
    Matrix V(n, n);
    for (std::size_t i = 0; i < n; ++i) V(i, i) = 1.0;

    double scale = 0.0;
    for (double v : A.data()) scale += v * v;
    const double tol = 1e-30 * std::max(scale, 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (off <= tol) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return A(a, a) > A(b, b); });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = A(order[i], order[i]);
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, i) = V(k, order[i]);
    }
    return out;
}

namespace {

void normalize(std::vector<double>& v) {
    double norm = std::sqrt(dot(v, v));
    for (double& x : v) x /= norm;
}

void fix_sign(std::vector<double>& v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0)
        for (double& x : v) x = -x;
}

// Unit vector orthogonal to `basis`, from the standard basis vector with the largest residual.
std::vector<double> orthogonal_complement(const std::vector<std::vector<double>>& basis, std::size_t d) {
    std::vector<double> best;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> e(d, 0.0);
        e[j] = 1.0;
        for (const auto& b : basis) {
            double p = dot(e, b);
            for (std::size_t i = 0; i < d; ++i) e[i] -= p * b[i];
        }
        double nrm = dot(e, e);
        if (nrm > best_norm + 1e-12) {
            best_norm = nrm;
            best = std::move(e);
        }
    }
    normalize(best);
    return best;
}

}  // namespace

PcaResult pca2(const Matrix& X) {
    const std::size_t n = X.rows(), d = X.cols();
    if (n < 2) throw std::invalid_argument("pca2: need at least two rows");
    if (d == 0) throw std::invalid_argument("pca2: no columns");

    Matrix Xc = X;
    for (std::size_t c = 0; c < d; ++c) {
        double m = 0.0;
        for (std::size_t r = 0; r < n; ++r) m += X(r, c);
        m /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r) Xc(r, c) -= m;
    }
    const double denom = static_cast<double>(n - 1);

    PcaResult res;
    std::vector<std::vector<double>> comps;
    std::vector<double> values;
    if (d <= n) {
        Matrix C(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                double s = 0.0;
                for (std::size_t r = 0; r < n; ++r) s += Xc(r, i) * Xc(r, j);
                C(i, j) = C(j, i) = s / denom;
            }
        for (std::size_t i = 0; i < d; ++i) res.total_variance += C(i, i);
        if (!(res.total_variance > 0.0)) throw std::invalid_argument("pca2: input has rank 0");
        auto eig = jacobi_eigen(std::move(C));
        for (std::size_t i = 0; i < std::min<std::size_t>(2, d); ++i) {
            std::vector<double> v(d);
            for (std::size_t k = 0; k < d; ++k) v[k] = eig.vectors(k, i);
            normalize(v);
            comps.push_back(std::move(v));
            values.push_back(eig.values[i]);
        }
    } else {
        // Nonzero covariance eigenpairs from the Gram matrix: C v = l v with v = Xc^T u / sqrt((n-1) l).
        Matrix G(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) G(i, j) = G(j, i) = dot(Xc.row(i), Xc.row(j)) / denom;
        for (std::size_t i = 0; i < n; ++i) res.total_variance += G(i, i);
        if (!(res.total_variance > 0.0)) throw std::invalid_argument("pca2: input has rank 0");
        auto eig = jacobi_eigen(std::move(G));
        for (std::size_t i = 0; i < 2; ++i) {
            const double lambda = eig.values[i];
            if (lambda <= 1e-12 * res.total_variance) {
                comps.push_back(orthogonal_complement(comps, d));
                values.push_back(0.0);
                continue;
            }
            std::vector<double> v(d, 0.0);
            for (std::size_t r = 0; r < n; ++r) {
                const double u = eig.vectors(r, i);
                for (std::size_t k = 0; k < d; ++k) v[k] += Xc(r, k) * u;
            }
            normalize(v);
            comps.push_back(std::move(v));
            values.push_back(lambda);
        }
    }
    if (comps.size() < 2) {  // one-column input
        comps.push_back(std::vector<double>(d, 0.0));
        values.push_back(0.0);
    }
    for (int i = 0; i < 2; ++i) {
        if (i == 0 || dot(comps[i], comps[i]) > 0) fix_sign(comps[i]);
        res.components[i] = std::move(comps[i]);
        res.explained_variance[i] = std::max(0.0, values[i]);
        res.explained_variance_ratio[i] = res.explained_variance[i] / res.total_variance;
    }
    res.projected = Matrix(n, 2);
    for (std::size_t r = 0; r < n; ++r)
        for (int i = 0; i < 2; ++i) res.projected(r, i) = dot(X.row(r), res.components[i]);
    return res;
}

}  // namespace termgraph::ml
