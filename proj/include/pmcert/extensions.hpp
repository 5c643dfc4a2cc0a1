#pragma once

#include <vector>

#include "pmcert/scenario.hpp"

namespace pmcert {

/// Gram matrix of rank-1 POVM effects, Gamma_{b,b'} = tr(N_b N_b').
struct MomentMatrix {
    int m = 0;
    RealMatrix gamma;
};

struct PovmCertificate {
    bool is_rank1_consistent = false;
    bool is_extremal = false;
    bool is_ic = false;
    bool is_sic = false;
    double min_singular_value = 0.0;
};

/// Assembles the effect Gram matrix from certified state overlaps and
/// effect weights: Gamma_{b,b'} = alpha_b alpha_b' tr(sigma_b sigma_b').
/// `state_overlaps` is the m x m matrix of tr(sigma_b sigma_b') with unit
/// diagonal; weights must lie in (0,1] and sum to d.
MomentMatrix moment_matrix_from_stats(const RealMatrix& state_overlaps,
                                      const std::vector<double>& alphas, int d);

/// Extremality, information completeness and the symmetric-IC relation,
/// decided from the moment matrix alone. Requires m >= d.
PovmCertificate certify_povm(const MomentMatrix& mm, int d);

/// Max residual of the two defining condition families of the rank-1
/// certification scheme: tr(rho^b_a N_b) = 0 for a != 1 and
/// tr(rho^x_a M^x_b) = delta_ab. `bases[x]` lists the d states of basis x.
double verify_povm_scheme_stats(const std::vector<std::vector<QuantumState>>& bases,
                                const Povm& n);

struct IntermediatePair {
    QuantumState z_state;
    double target_sum;  // 1 + sqrt(tr(r1 r2))
};

/// The unique pure state maximizing tr(rho_z (r1 + r2)) for a non-orthogonal
/// pure pair; attains 1 + sqrt(tr(r1 r2)). Works in the pair's 2D span for
/// any dimension. Throws for (numerically) orthogonal pairs.
IntermediatePair intermediate_state(const QuantumState& r1, const QuantumState& r2);

/// Max over intermediate rows of |p(a|z,x) + p(a'|z,x') - 1 - sqrt(p(a'|x,a,x'))|.
/// Zero certifies that state overlaps are independent of any shared
/// randomness. Throws when the table carries no intermediate rows.
double check_sr_identity(const StatTable& stats);

/// Appends exact intermediate-state rows for every non-orthogonal pair
/// (x,a), (x',a') with x != x', a != a' of the target scenario.
void append_intermediate_entries(StatTable& table, const PmScenario& s);

/// The two-setting shared-randomness attack: both devices prepare and
/// measure the computational basis, flipping outcomes on x = y = 2 for one
/// value of the shared bit. Reproduces the two-MUB table exactly (including
/// perfect correlations) while no intermediate row can satisfy the overlap
/// identity. Intermediate rows use the attacker's best static choice.
StatTable flip_adversary_table();

}  // namespace pmcert
