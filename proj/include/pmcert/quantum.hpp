#pragma once

#include <vector>

#include "pmcert/linalg.hpp"

namespace pmcert {

// Pauli convention: |0> is the +1 eigenvector of sigma_z, so |0><0| has
// Bloch vector (0,0,1) and |+><+| has (1,0,0).
const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();

constexpr double kHermitianTol = 1e-9;
constexpr double kPsdTol = 1e-9;
constexpr double kTraceTol = 1e-9;
constexpr double kPovmSumTol = 1e-8;

/// Density matrix: Hermitian, PSD within tolerance, unit trace.
class QuantumState {
  public:
    explicit QuantumState(const ComplexMatrix& m);

    static QuantumState pure(const ComplexVector& amplitudes);
    static QuantumState from_bloch(const Bloch& n);
    static QuantumState maximally_mixed(int d);

    const ComplexMatrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    double purity() const;

    /// Bloch components (tr(rho sigma_i)); requires dim == 2.
    Bloch bloch() const;

  private:
    ComplexMatrix m_;
};

/// Ordered list of PSD effects summing to the identity.
class Povm {
  public:
    explicit Povm(std::vector<ComplexMatrix> effects);

    const std::vector<ComplexMatrix>& effects() const { return effects_; }
    const ComplexMatrix& effect(int b) const { return effects_.at(b); }
    int outcomes() const { return static_cast<int>(effects_.size()); }
    int dim() const { return static_cast<int>(effects_.front().rows()); }

  private:
    std::vector<ComplexMatrix> effects_;
};

/// (1/2)||r1 - r2||_1. For qubits this equals half the Euclidean distance
/// of the Bloch vectors.
double trace_distance(const QuantumState& r1, const QuantumState& r2);

/// tr(r1 r2), real up to numerical noise.
double fidelity_linear(const QuantumState& r1, const QuantumState& r2);

Bloch bloch_from_state(const QuantumState& r);
QuantumState state_from_bloch(const Bloch& n);

// SU(2) <-> SO(3) primitives. Quaternion (w,x,y,z) maps to
// U = w*1 - i(x sx + y sy + z sz) and to the rotation R acting on Bloch
// vectors, with U state(n) U^dag = state(R n).
ComplexMatrix su2_from_quaternion(const Eigen::Vector4d& q);
RealMatrix rotation_from_quaternion(const Eigen::Vector4d& q);
Eigen::Vector4d quaternion_from_rotation(const RealMatrix& r);

}  // namespace pmcert
