#pragma once

#include <vector>

#include "pmcert/scenario.hpp"

namespace pmcert {

/// Best-aligning transformation between experimental and target qubit
/// realizations: an orthogonal Bloch map O (det +1 or -1), realized on
/// states as conjugation by `unitary` preceded by transposition in the
/// computational basis when `transposed` is set.
struct Alignment {
    RealMatrix rotation;          // 3x3 orthogonal, det recorded by sign
    ComplexMatrix unitary;        // 2x2 special unitary realizing the rotation part
    bool transposed = false;      // det(rotation) == -1
    double residual = 0.0;        // sqrt(sum |x_i - O y_i|^2)
    double achieved_avg_fidelity = 0.0;  // over the aligned vector pairs

    /// U (rho^T) U^dag or U rho U^dag according to the transposition flag.
    QuantumState apply(const QuantumState& rho) const;
};

/// Least-squares orthogonal alignment of experimental Bloch vectors onto
/// target ones, solved by SVD of the cross-covariance over the full O(3).
Alignment procrustes_align(const std::vector<Bloch>& target,
                           const std::vector<Bloch>& experimental);

/// Unitary realizing a proper rotation: U state(n) U^dag = state(R n),
/// global phase fixed by a nonnegative real trace.
ComplexMatrix su2_from_so3(const RealMatrix& r);

/// Average linear fidelity over all 2n states after applying the alignment.
double achieved_fidelity(const Alignment& a, const PmScenario& s,
                         const ExperimentalRealization& r);

/// Average-fidelity lower bound over m chosen states from the orthogonal
/// alignment route. `bloch_rows` holds the m target Bloch vectors as rows;
/// rank-2 configurations are truncated to their plane internally.
double procrustes_fidelity_bound(double eps, const RealMatrix& bloch_rows);

/// Same bound, unclipped (may go negative).
double procrustes_fidelity_bound_raw(double eps, const RealMatrix& bloch_rows);

/// P_m(eps, L) itself, for diagnostics and continuity tests.
double procrustes_misfit_bound(double eps, const RealMatrix& bloch_rows);

/// Noise level at which the leading-order deficit of the alignment-route
/// certificate reaches fidelity 1/2; reproduces the published thresholds
/// for the trine and tetrahedron configurations.
double procrustes_noise_limit(int m, double pinv_norm);

/// Leading deficit coefficient of the alignment-route bound, numerically
/// extracted; equals 1 + 4(m-1)||L_pinv||^2 in closed form.
double procrustes_asymptotic_constant(const RealMatrix& bloch_rows);

/// Operator norm of the pseudo-inverse of the (possibly truncated) row
/// matrix of Bloch vectors.
double bloch_rows_pinv_norm(const RealMatrix& bloch_rows);

}  // namespace pmcert
