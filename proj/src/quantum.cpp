#include "pmcert/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace pmcert {

namespace {

const Complex kI(0.0, 1.0);

ComplexMatrix make_pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix make_pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

ComplexMatrix make_pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

ComplexMatrix hermitized(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": not square");
    if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
        throw std::invalid_argument(std::string(what) + ": not Hermitian");
    return 0.5 * (m + m.adjoint().eval());
}

double min_eigenvalue(const ComplexMatrix& herm) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

const ComplexMatrix& pauli_x() {
    static const ComplexMatrix m = make_pauli_x();
    return m;
}

const ComplexMatrix& pauli_y() {
    static const ComplexMatrix m = make_pauli_y();
    return m;
}

const ComplexMatrix& pauli_z() {
    static const ComplexMatrix m = make_pauli_z();
    return m;
}

QuantumState::QuantumState(const ComplexMatrix& m) : m_(hermitized(m, "QuantumState")) {
    if (std::abs(m_.trace().real() - 1.0) > kTraceTol)
        throw std::invalid_argument("QuantumState: trace differs from 1");
    if (min_eigenvalue(m_) < -kPsdTol)
        throw std::invalid_argument("QuantumState: negative eigenvalue");
}

QuantumState QuantumState::pure(const ComplexVector& amplitudes) {
    const double norm = amplitudes.norm();
    if (norm < 1e-12) throw std::invalid_argument("QuantumState::pure: zero vector");
    const ComplexVector v = amplitudes / norm;
    return QuantumState(v * v.adjoint());
}

QuantumState QuantumState::from_bloch(const Bloch& n) {
    if (n.norm() > 1.0 + 1e-9)
        throw std::invalid_argument("QuantumState::from_bloch: |n| > 1");
    ComplexMatrix m = 0.5 * (complex_identity(2) + n.x() * pauli_x() +
                             n.y() * pauli_y() + n.z() * pauli_z());
    return QuantumState(m);
}

QuantumState QuantumState::maximally_mixed(int d) {
    return QuantumState(complex_identity(d) / static_cast<double>(d));
}

double QuantumState::purity() const { return (m_ * m_).trace().real(); }

Bloch QuantumState::bloch() const {
    if (dim() != 2) throw std::invalid_argument("bloch: state is not a qubit");
    return Bloch((m_ * pauli_x()).trace().real(), (m_ * pauli_y()).trace().real(),
                 (m_ * pauli_z()).trace().real());
}

Povm::Povm(std::vector<ComplexMatrix> effects) : effects_(std::move(effects)) {
    if (effects_.empty()) throw std::invalid_argument("Povm: no effects");
    const auto d = effects_.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (auto& e : effects_) {
        e = hermitized(e, "Povm effect");
        if (e.rows() != d) throw std::invalid_argument("Povm: mixed dimensions");
        if (min_eigenvalue(e) < -kPsdTol)
            throw std::invalid_argument("Povm: effect not positive semidefinite");
        sum += e;
    }
    if ((sum - complex_identity(static_cast<int>(d))).cwiseAbs().maxCoeff() > kPovmSumTol)
        throw std::invalid_argument("Povm: effects do not sum to the identity");
}

double trace_distance(const QuantumState& r1, const QuantumState& r2) {
    if (r1.dim() != r2.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r1.matrix() - r2.matrix(),
                                                    Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity_linear(const QuantumState& r1, const QuantumState& r2) {
    if (r1.dim() != r2.dim()) throw std::invalid_argument("fidelity_linear: dimension mismatch");
    return (r1.matrix() * r2.matrix()).trace().real();
}

Bloch bloch_from_state(const QuantumState& r) { return r.bloch(); }

QuantumState state_from_bloch(const Bloch& n) { return QuantumState::from_bloch(n); }

ComplexMatrix su2_from_quaternion(const Eigen::Vector4d& q) {
    const double w = q(0), x = q(1), y = q(2), z = q(3);
    ComplexMatrix u(2, 2);
    u << Complex(w, -z), Complex(-y, -x), Complex(y, -x), Complex(w, z);
    return u;
}

RealMatrix rotation_from_quaternion(const Eigen::Vector4d& q) {
    const double w = q(0), x = q(1), y = q(2), z = q(3);
    RealMatrix r(3, 3);
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return r;
}

Eigen::Vector4d quaternion_from_rotation(const RealMatrix& r) {
    // Shepperd's method: branch on the largest of (w^2, x^2, y^2, z^2).
    Eigen::Vector4d q;
    const double t = r.trace();
    if (t > r(0, 0) && t > r(1, 1) && t > r(2, 2)) {
        const double s = std::sqrt(1.0 + t) * 2.0;
        q << 0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s,
            (r(1, 0) - r(0, 1)) / s;
    } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
        const double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
        q << (r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s,
            (r(0, 2) + r(2, 0)) / s;
    } else if (r(1, 1) > r(2, 2)) {
        const double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
        q << (r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s,
            (r(1, 2) + r(2, 1)) / s;
    } else {
        const double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
        q << (r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s,
            (r(1, 2) + r(2, 1)) / s, 0.25 * s;
    }
    q.normalize();
    // Canonical sign: nonnegative scalar part, first nonzero component
    // positive when the scalar part vanishes.
    if (q(0) < -1e-12) q = -q;
    if (std::abs(q(0)) <= 1e-12) {
        for (int i = 1; i < 4; ++i) {
            if (std::abs(q(i)) > 1e-12) {
                if (q(i) < 0) q = -q;
                break;
            }
        }
    }
    return q;
}

}  // namespace pmcert
