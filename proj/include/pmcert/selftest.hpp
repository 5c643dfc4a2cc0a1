#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pmcert/scenario.hpp"

namespace pmcert {

/// Thrown when ||Gamma_S^-1|| O_k(eps) >= 1, outside the region where the
/// perturbation kernels apply.
struct ValidityExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Frobenius-norm envelope for the deviation of an m x m Gram matrix of
/// experimental Bloch vectors: sqrt(4m(m-1) e (1 + 2 sqrt(e) + (m+3)/(m-1) e)).
double gram_deviation_frobenius(double eps, int m);

/// F_k for k in {2,3}; same envelope as gram_deviation_frobenius.
double f_k(double eps, int k);

/// Operator-norm envelope O_k(e) = 2((k-1) sqrt(e) + (k+1) e), k in {2,3}.
double o_k(double eps, int k);

/// Subset S of settings with linearly independent primary Bloch vectors,
/// together with the derived Gram/Cholesky data and the decomposition
/// coefficients of every off-subset Bloch vector.
struct SubsetSelection {
    std::vector<int> settings;  // 0-based, sorted
    int k = 0;
    RealMatrix gram;            // k x k
    RealMatrix chol;            // lower factor of gram
    double gram_norm = 0.0;
    double gram_fro = 0.0;
    double chol_norm = 0.0;
    double gram_inv_norm = 0.0;
    // (x, a) -> coefficients in the basis {n^s_1}_{s in S}, for x not in S.
    std::map<std::pair<int, int>, RealVector> coeffs;
    // Orthonormal basis of the Bloch span (3 x k); used to truncate row
    // matrices when k == 2.
    RealMatrix span_basis;

    bool in_subset(int x) const;
};

/// Picks the subset minimizing E_{S,k} at a reference noise level
/// (measured eps when supplied, otherwise half the subset's own threshold),
/// ties broken lexicographically. Throws when the Bloch rank is < 2.
SubsetSelection select_subset(const PmScenario& s,
                              std::optional<double> eps = std::nullopt);

/// E_{S,k}(e); throws ValidityExceeded when the kernel condition fails.
double e_sk(double eps, const SubsetSelection& sel);

/// Root of ||Gamma_S^-1|| O_k(e) = 1; the kernel bounds exist below this.
double validity_limit(const SubsetSelection& sel);

/// Noise threshold below which the certified average-state-fidelity lower
/// bound is non-vacuous (positive). Always below validity_limit.
double epsilon0(const SubsetSelection& sel, const PmScenario& s);

struct TraceDistanceBounds {
    double in_subset_a1_avg;  // average over x in S, a = 1
    double in_subset_a2_avg;  // average over x in S, a = 2
    std::map<std::pair<int, int>, double> off_subset;  // per state
};

TraceDistanceBounds trace_distance_bounds(double eps, const SubsetSelection& sel,
                                          const PmScenario& s);

struct MeasurementBounds {
    double in_subset_avg;            // average over y in S of ||U M~ U^t - M||
    std::map<int, double> off_subset;  // per setting
};

MeasurementBounds measurement_bounds(double eps, const SubsetSelection& sel,
                                     const PmScenario& s);

struct SelfTestBounds {
    double epsilon = 0.0;
    double epsilon0 = 0.0;        // vacuity threshold
    double validity_limit = 0.0;  // kernel-condition limit
    bool valid = false;           // epsilon < epsilon0
    std::vector<int> subset;      // selected settings (0-based)
    int k = 0;
    double e_value = 0.0;         // E_{S,k}(epsilon), when valid
    std::optional<TraceDistanceBounds> td;
    std::optional<MeasurementBounds> meas;
    // Fidelity lower bounds (clipped to [0,1]); flags mark clipping.
    double fid_in_subset_a1 = 0.0;
    double fid_in_subset_a2 = 0.0;
    std::map<std::pair<int, int>, double> fid_off_subset;
    double fid_meas_in_subset = 0.0;
    std::map<int, double> fid_meas_off_subset;
    double avg_state_fidelity_lower = 0.0;
    double avg_meas_fidelity_lower = 0.0;
    bool vacuous_state = false;
    bool vacuous_meas = false;
};

SelfTestBounds fidelity_bounds(double eps, const SubsetSelection& sel,
                               const PmScenario& s);

/// Scenario-wide average-state-fidelity lower bound, unclipped (may be
/// negative); used for threshold root-finding and sweeps.
double avg_state_fidelity_lower_raw(double eps, const SubsetSelection& sel,
                                    const PmScenario& s);
double avg_meas_fidelity_lower_raw(double eps, const SubsetSelection& sel,
                                   const PmScenario& s);

/// Leading coefficient C of the fidelity deficit, f(e) ~ C e, extracted
/// numerically at e = 1e-7 with a sqrt(e) Richardson refinement.
double asymptotic_constant(const PmScenario& s, const SubsetSelection& sel);

struct SweepRow {
    double epsilon;
    double fid_a1;
    double fid_a2;
    double fid_meas;
    bool valid;
};

/// Grid must lie within [0, epsilon0).
std::vector<SweepRow> sweep(const PmScenario& s, const std::vector<double>& grid);

}  // namespace pmcert
