#include "pmcert/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace pmcert {

namespace {

template <typename M>
void check_finite(const M& m) {
    if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
}

}  // namespace

double operator_norm(const RealMatrix& m) {
    check_finite(m);
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<RealMatrix> svd(m);
    return svd.singularValues()(0);
}

double operator_norm(const ComplexMatrix& m) {
    check_finite(m);
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

double frobenius_norm(const RealMatrix& m) {
    check_finite(m);
    return m.norm();
}

double frobenius_norm(const ComplexMatrix& m) {
    check_finite(m);
    return m.norm();
}

RealMatrix cholesky_lower(const RealMatrix& g, double pivot_tol) {
    check_finite(g);
    const auto n = g.rows();
    if (n != g.cols()) throw std::invalid_argument("cholesky: matrix not square");
    const double scale = g.cwiseAbs().maxCoeff();
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, scale))
        throw std::invalid_argument("cholesky: matrix not symmetric");

    RealMatrix l = RealMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = g(j, j);
        for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (pivot <= pivot_tol)
            throw NotPositiveDefinite("cholesky pivot below threshold: vectors linearly dependent");
        l(j, j) = std::sqrt(pivot);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = g(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

RealMatrix pseudo_inverse_tall(const RealMatrix& m) {
    check_finite(m);
    if (m.rows() < m.cols())
        throw std::invalid_argument("pseudo_inverse_tall: matrix has more columns than rows");
    const RealMatrix normal = m.transpose() * m;
    RealMatrix l;
    try {
        l = cholesky_lower(normal);
    } catch (const NotPositiveDefinite&) {
        throw NotPositiveDefinite("pseudo_inverse_tall: rank deficient");
    }
    // (M^T M)^{-1} M^T via two triangular solves.
    const RealMatrix rhs = m.transpose();
    const RealMatrix y = l.triangularView<Eigen::Lower>().solve(rhs);
    return l.transpose().triangularView<Eigen::Upper>().solve(y);
}

ComplexMatrix complex_identity(int d) { return ComplexMatrix::Identity(d, d); }

}  // namespace pmcert
