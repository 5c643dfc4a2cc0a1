#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pmcert/scenario.hpp"

namespace pmcert {

/// Refined qubit bounds, valid for eps <= 1/3. Outside that range the
/// fields fall back to the generic dimension-2 values and `fallback` is set.
struct QubitRefinement {
    double norm_lower;   // per-state ||rho~|| >= (1-2e)/(1-e)
    double state_tol;    // e + sqrt(e)
    double meas_tol;     // e + (1+e) sqrt(e)
    double effect_gap;   // ||rho~ - M~|| <= sqrt(e)
    bool fallback;
};

struct PairInterval {
    int x, a, x2, a2;        // 0-based indices of the two preparations
    double target;           // tr(rho^x_a rho^x2_a2)
    double state_lo, state_hi;
    double meas_lo, meas_hi;
    bool same_setting;       // x == x2: interval from orthogonality of targets
    bool beyond_stated_scope;  // x != x2 but a == a2 (same formula, flagged)
};

struct OverlapCertificate {
    double epsilon;
    int d;
    double purity_lower;        // per-setting lower bound on sum_a ||rho~^x_a||
    double projectivity_lower;  // per-setting lower bound on sum_b ||M~^y_b||
    double state_tol_general;
    double meas_tol_general;
    std::optional<QubitRefinement> qubit;
    double state_overlap_tolerance;        // operative value
    double measurement_overlap_tolerance;  // operative value
    std::vector<PairInterval> pairs;
};

/// d(1-2e) clipped at 0.
double purity_bound(double eps, int d);

/// d(1-e) clipped at 0.
double projectivity_bound(double eps, int d);

/// e + sqrt(2e + d^2 e^2).
double state_overlap_tol(double eps, int d);

/// e + (1 + d e) sqrt(2e + d^2 e^2).
double measurement_overlap_tol(double eps, int d);

QubitRefinement qubit_refinements(double eps);

OverlapCertificate certify(const StatTable& observed, const PmScenario& scenario);

/// n=2, d=2 pair whose statistics deviate by exactly eps while the realized
/// state-overlap deviation is sqrt(eps - eps^2). Requires 0 < eps < 1/2.
std::pair<PmScenario, ExperimentalRealization> tightness_fixture_qubit(double eps);

/// d-outcome POVM with one effect inflated by eps(d-1) on the coherent
/// subspace state; sums to the identity. Requires 0 < eps < 1/(d-1).
Povm tightness_fixture_dim(double eps, int d);

}  // namespace pmcert
