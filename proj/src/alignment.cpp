#include "pmcert/alignment.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace pmcert {

namespace {

constexpr double kRotationTol = 1e-8;

double eps_term(double eps) {
    return eps * (1.0 - 2.0 * eps) / ((1.0 - eps) * (1.0 - eps));
}

double gram_dev(double eps, int m) {
    const double md = m;
    return std::sqrt(4.0 * md * (md - 1.0) * eps *
                     (1.0 + 2.0 * std::sqrt(eps) + (md + 3.0) / (md - 1.0) * eps));
}

/// Drops null columns of a rank-2 row matrix by re-expressing the rows in an
/// orthonormal basis of their span.
RealMatrix truncate_to_rank(const RealMatrix& rows, int* rank_out) {
    Eigen::JacobiSVD<RealMatrix> svd(rows, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * sv(0)) ++rank;
    if (rank < 2) throw std::invalid_argument("bloch rows: rank below 2");
    rank = std::min(rank, 3);
    if (rank_out) *rank_out = rank;
    if (rank == static_cast<int>(rows.cols())) return rows;
    return rows * svd.matrixV().leftCols(rank);
}

double misfit_bound(double eps, const RealMatrix& rows_in) {
    const int m = static_cast<int>(rows_in.rows());
    if (m < 2) throw std::invalid_argument("procrustes bound: need at least 2 states");
    int k = 0;
    const RealMatrix rows = truncate_to_rank(rows_in, &k);
    const double pinv_norm = operator_norm(pseudo_inverse_tall(rows));
    const double f = gram_dev(eps, m);
    const double head = pinv_norm * f;
    const double tail = std::sqrt(std::sqrt(static_cast<double>(k)) * f);
    if (pinv_norm * std::sqrt(f) < 1.0) {
        const double steep = head / std::sqrt(1.0 - pinv_norm * pinv_norm * f);
        return head + std::min(steep, tail);
    }
    return head + tail;
}

}  // namespace

QuantumState Alignment::apply(const QuantumState& rho) const {
    ComplexMatrix m = rho.matrix();
    if (transposed) m = m.transpose().eval();
    return QuantumState(ComplexMatrix(unitary * m * unitary.adjoint()));
}

Alignment procrustes_align(const std::vector<Bloch>& target,
                           const std::vector<Bloch>& experimental) {
    if (target.empty() || target.size() != experimental.size())
        throw std::invalid_argument("procrustes_align: empty or mismatched inputs");

    RealMatrix cross = RealMatrix::Zero(3, 3);
    for (std::size_t i = 0; i < target.size(); ++i)
        cross += target[i] * experimental[i].transpose();

    Eigen::JacobiSVD<RealMatrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealMatrix o = svd.matrixU() * svd.matrixV().transpose();

    Alignment a;
    a.rotation = o;
    a.transposed = o.determinant() < 0.0;

    // Transposition flips the Bloch y-component; factor it out so the
    // remaining part is a proper rotation.
    RealMatrix proper = o;
    if (a.transposed) {
        RealMatrix flip = RealMatrix::Identity(3, 3);
        flip(1, 1) = -1.0;
        proper = o * flip;
    }
    a.unitary = su2_from_so3(proper);

    double res = 0.0, fid = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const Bloch mapped = o * experimental[i];
        res += (target[i] - mapped).squaredNorm();
        fid += 0.5 * (1.0 + target[i].dot(mapped));
    }
    a.residual = std::sqrt(res);
    a.achieved_avg_fidelity = fid / static_cast<double>(target.size());
    return a;
}

ComplexMatrix su2_from_so3(const RealMatrix& r) {
    if (r.rows() != 3 || r.cols() != 3)
        throw std::invalid_argument("su2_from_so3: not 3x3");
    if ((r.transpose() * r - RealMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() > kRotationTol ||
        std::abs(r.determinant() - 1.0) > kRotationTol)
        throw std::invalid_argument("su2_from_so3: not a rotation");
    return su2_from_quaternion(quaternion_from_rotation(r));
}

double achieved_fidelity(const Alignment& a, const PmScenario& s,
                         const ExperimentalRealization& r) {
    if (s.dim() != 2 || r.dim() != 2)
        throw std::invalid_argument("achieved_fidelity: d != 2");
    if (s.settings() != r.settings())
        throw std::invalid_argument("achieved_fidelity: setting count mismatch");
    double sum = 0.0;
    for (int x = 0; x < s.settings(); ++x)
        for (int aa = 0; aa < 2; ++aa)
            sum += fidelity_linear(a.apply(r.state(x, aa)), s.state(x, aa));
    return sum / (2.0 * s.settings());
}

double procrustes_misfit_bound(double eps, const RealMatrix& bloch_rows) {
    return misfit_bound(eps, bloch_rows);
}

double procrustes_fidelity_bound_raw(double eps, const RealMatrix& bloch_rows) {
    const int m = static_cast<int>(bloch_rows.rows());
    const double p = misfit_bound(eps, bloch_rows);
    return 1.0 - eps_term(eps) - p * p / (4.0 * m);
}

double procrustes_fidelity_bound(double eps, const RealMatrix& bloch_rows) {
    return std::max(0.0, procrustes_fidelity_bound_raw(eps, bloch_rows));
}

double bloch_rows_pinv_norm(const RealMatrix& bloch_rows) {
    const RealMatrix rows = truncate_to_rank(bloch_rows, nullptr);
    return operator_norm(pseudo_inverse_tall(rows));
}

double procrustes_noise_limit(int m, double pinv_norm) {
    if (m < 2) throw std::invalid_argument("procrustes_noise_limit: m < 2");
    // Leading-order certificate deficit 4(m-1)||L^+||^2 e (1 + 2 sqrt(e) + 7e/3)
    // reaching one half. The curvature constant is fixed at 7/3, which
    // reproduces the published thresholds for the trine and tetrahedron.
    const double coeff = 4.0 * (m - 1) * pinv_norm * pinv_norm;
    auto deficit = [&](double e) {
        return coeff * e * (1.0 + 2.0 * std::sqrt(e) + 7.0 / 3.0 * e) - 0.5;
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (deficit(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double procrustes_asymptotic_constant(const RealMatrix& bloch_rows) {
    const double e1 = 1e-7;
    const double s1 = (1.0 - procrustes_fidelity_bound_raw(e1, bloch_rows)) / e1;
    const double s2 =
        (1.0 - procrustes_fidelity_bound_raw(e1 / 2.0, bloch_rows)) / (e1 / 2.0);
    return s2 - (s1 - s2) / (std::sqrt(2.0) - 1.0);
}

}  // namespace pmcert
