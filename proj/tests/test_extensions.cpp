#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "pmcert/catalog.hpp"
#include "pmcert/extensions.hpp"
#include "pmcert/rng.hpp"

using namespace pmcert;

namespace {

RealMatrix sic_state_overlaps() {
    RealMatrix overlaps(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) overlaps(i, j) = (i == j) ? 1.0 : 1.0 / 3.0;
    return overlaps;
}

}  // namespace

TEST_CASE("moment matrix assembly") {
    // Projective measurement treated as rank-1: orthonormal effects.
    RealMatrix ortho = RealMatrix::Identity(3, 3);
    const MomentMatrix id3 = moment_matrix_from_stats(ortho, {1.0, 1.0, 1.0}, 3);
    CHECK(id3.gamma.isApprox(RealMatrix::Identity(3, 3), 1e-12));

    // Qubit symmetric measurement: weights 1/2, state overlaps 1/3.
    const MomentMatrix sic = moment_matrix_from_stats(sic_state_overlaps(),
                                                      {0.5, 0.5, 0.5, 0.5}, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(sic.gamma(i, j) ==
                  doctest::Approx(i == j ? 0.25 : 1.0 / 12.0).epsilon(1e-14));

    // Planar three-outcome measurement: weights 2/3, state overlaps 1/4.
    RealMatrix trine_overlaps(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) trine_overlaps(i, j) = (i == j) ? 1.0 : 0.25;
    const MomentMatrix trine = moment_matrix_from_stats(
        trine_overlaps, {2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0}, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(trine.gamma(i, j) ==
                  doctest::Approx(i == j ? 4.0 / 9.0 : 1.0 / 9.0).epsilon(1e-14));

    CHECK_THROWS_AS(moment_matrix_from_stats(ortho, {0.5, 0.5, 0.5}, 3),
                    std::invalid_argument);
}

TEST_CASE("moment matrices of physical inputs are positive semidefinite") {
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        // Random rank-1 qubit measurement: effects alpha_b |v_b><v_b| found by
        // normalizing a random frame.
        const int m = 3 + static_cast<int>(rng.uniform(0, 3));
        std::vector<Bloch> dirs;
        std::vector<double> alphas;
        Bloch sum = Bloch::Zero();
        for (int i = 0; i < m - 1; ++i) {
            dirs.push_back(rng.unit3());
            alphas.push_back(rng.uniform(0.05, 2.0 / m));
            sum += alphas.back() * dirs.back();
        }
        // Close the frame: last effect balances the Bloch part.
        double rest_alpha = 2.0 - 0.0;
        double acc = 0.0;
        for (double a : alphas) acc += a;
        rest_alpha = 2.0 - acc;
        if (rest_alpha <= sum.norm() + 1e-6 || rest_alpha > 1.0) continue;
        dirs.push_back(-sum / rest_alpha);
        alphas.push_back(rest_alpha);
        if (dirs.back().norm() > 1.0) continue;

        RealMatrix overlaps(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                overlaps(i, j) = 0.5 * (1.0 + dirs[i].normalized().dot(dirs[j].normalized()));
        for (int i = 0; i < m; ++i) overlaps(i, i) = 1.0;
        // Only rank-1 inputs: skip frames whose closing direction is interior.
        if (std::abs(dirs.back().norm() - 1.0) > 0.5) continue;
        dirs.back().normalize();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                overlaps(i, j) = 0.5 * (1.0 + dirs[i].dot(dirs[j]));

        const MomentMatrix mm = moment_matrix_from_stats(overlaps, alphas, 2);
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(mm.gamma, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-9);
    }
}

TEST_CASE("povm certification flags") {
    const MomentMatrix sic = moment_matrix_from_stats(sic_state_overlaps(),
                                                      {0.5, 0.5, 0.5, 0.5}, 2);
    const PovmCertificate cert = certify_povm(sic, 2);
    CHECK(cert.is_rank1_consistent);
    CHECK(cert.is_extremal);
    CHECK(cert.is_ic);
    CHECK(cert.is_sic);

    // Orthonormal two-outcome case: extremal but not informationally complete.
    MomentMatrix id2{2, RealMatrix::Identity(2, 2)};
    const PovmCertificate c2 = certify_povm(id2, 2);
    CHECK(c2.is_extremal);
    CHECK_FALSE(c2.is_ic);
    CHECK_FALSE(c2.is_sic);

    // A repeated row destroys extremality.
    MomentMatrix rep{3, RealMatrix(3, 3)};
    rep.gamma << 0.3, 0.1, 0.1, 0.1, 0.2, 0.2, 0.1, 0.2, 0.2;
    const PovmCertificate c3 = certify_povm(rep, 2);
    CHECK_FALSE(c3.is_extremal);

    CHECK_THROWS_AS(certify_povm(id2, 3), std::invalid_argument);
}

TEST_CASE("symmetric relation detection is exact and rejects perturbations") {
    MomentMatrix mm = moment_matrix_from_stats(sic_state_overlaps(), {0.5, 0.5, 0.5, 0.5}, 2);
    CHECK(certify_povm(mm, 2).is_sic);
    mm.gamma(0, 1) += 2e-6;
    mm.gamma(1, 0) += 2e-6;
    CHECK_FALSE(certify_povm(mm, 2).is_sic);
}

TEST_CASE("scheme statistics verification for rank-1 measurements") {
    // Bases aligned with the tetrahedral directions: rho^b_1 = sigma_b.
    std::vector<std::vector<QuantumState>> bases;
    for (int b = 0; b < 4; ++b)
        bases.push_back({QuantumState::from_bloch(tetrahedron_direction(b)),
                         QuantumState::from_bloch(-tetrahedron_direction(b))});
    const Povm sic = sic_qubit_povm();
    CHECK(verify_povm_scheme_stats(bases, sic) < 1e-12);

    // Smearing the measurement produces a visible residual.
    std::vector<ComplexMatrix> smeared;
    for (const auto& e : sic.effects())
        smeared.push_back(0.98 * e + 0.02 * complex_identity(2) / 4.0);
    CHECK(verify_povm_scheme_stats(bases, Povm(smeared)) > 1e-3);

    // Misordered bases are caught immediately.
    std::vector<std::vector<QuantumState>> shuffled = {bases[1], bases[0], bases[2],
                                                       bases[3]};
    CHECK(verify_povm_scheme_stats(shuffled, sic) > 0.3);
}

TEST_CASE("intermediate states") {
    const QuantumState z = QuantumState::from_bloch(Bloch(0, 0, 1));
    const QuantumState x = QuantumState::from_bloch(Bloch(1, 0, 0));

    const IntermediatePair same = intermediate_state(z, z);
    CHECK((same.z_state.matrix() - z.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(same.target_sum == doctest::Approx(2.0));

    const IntermediatePair zp = intermediate_state(z, x);
    const Bloch expect = Bloch(1, 0, 1).normalized();
    CHECK((zp.z_state.bloch() - expect).norm() < 1e-10);
    CHECK(zp.target_sum == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-12));

    CHECK_THROWS_AS(intermediate_state(z, QuantumState::from_bloch(Bloch(0, 0, -1))),
                    std::invalid_argument);
}

TEST_CASE("intermediate state in higher dimension uses the pair span") {
    ComplexVector a(3), b(3);
    a << 1, 0, 0;
    b << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0;
    const QuantumState r1 = QuantumState::pure(a), r2 = QuantumState::pure(b);
    const IntermediatePair ip = intermediate_state(r1, r2);
    CHECK(ip.z_state.dim() == 3);
    const double lhs = fidelity_linear(ip.z_state, r1) + fidelity_linear(ip.z_state, r2);
    CHECK(lhs == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-12));
    // The maximizer stays inside the span of the pair.
    ComplexVector outside(3);
    outside << 0, 0, 1;
    CHECK(fidelity_linear(ip.z_state, QuantumState::pure(outside)) < 1e-12);
}

TEST_CASE("intermediate state satisfies the overlap identity") {
    Rng rng(303);
    for (int t = 0; t < 1000; ++t) {
        const QuantumState a = QuantumState::from_bloch(rng.unit3());
        const QuantumState b = QuantumState::from_bloch(rng.unit3());
        const double overlap = fidelity_linear(a, b);
        if (overlap < 1e-6) continue;
        const IntermediatePair ip = intermediate_state(a, b);
        const double lhs = fidelity_linear(ip.z_state, a) + fidelity_linear(ip.z_state, b);
        CHECK(std::abs(lhs - (1.0 + std::sqrt(overlap))) < 1e-12);
    }
}

TEST_CASE("intermediate state maximizes the summed overlap") {
    Rng rng(304);
    const QuantumState a = QuantumState::from_bloch(rng.unit3());
    const QuantumState b = QuantumState::from_bloch(rng.unit3());
    const IntermediatePair ip = intermediate_state(a, b);
    const double best = fidelity_linear(ip.z_state, a) + fidelity_linear(ip.z_state, b);
    // 10^4 pure states over the sphere never beat it.
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) {
            const double th = M_PI * (i + 0.5) / 100.0;
            const double ph = 2.0 * M_PI * j / 100.0;
            const QuantumState probe = QuantumState::from_bloch(
                Bloch(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                      std::cos(th)));
            CHECK(fidelity_linear(probe, a) + fidelity_linear(probe, b) <= best + 1e-12);
        }
}

TEST_CASE("shared-randomness identity on the ideal table") {
    const PmScenario s = catalog_scenario("mub2");
    StatTable table = born_table(s);
    CHECK_THROWS_AS(check_sr_identity(table), std::invalid_argument);
    append_intermediate_entries(table, s);
    CHECK(table.has_z_entries());
    CHECK(check_sr_identity(table) < 1e-12);
}

TEST_CASE("flip strategy reproduces the statistics but fails the identity") {
    const StatTable attack = flip_adversary_table();
    const PmScenario s = catalog_scenario("mub2");
    CHECK(deviation_epsilon(attack, s) < 1e-15);  // perfect correlations and all
    const double residual = check_sr_identity(attack);
    CHECK(residual > 0.1);
    CHECK(residual == doctest::Approx(std::sqrt(0.5) - 0.5).epsilon(1e-12));
}
