#include "pmcert/overlap_cert.hpp"

#include <cmath>

namespace pmcert {

double purity_bound(double eps, int d) {
    if (eps < 0.0) throw std::invalid_argument("purity_bound: eps < 0");
    return std::max(0.0, d * (1.0 - 2.0 * eps));
}

double projectivity_bound(double eps, int d) {
    if (eps < 0.0) throw std::invalid_argument("projectivity_bound: eps < 0");
    return std::max(0.0, d * (1.0 - eps));
}

double state_overlap_tol(double eps, int d) {
    if (eps < 0.0) throw std::invalid_argument("state_overlap_tol: eps < 0");
    return eps + std::sqrt(2.0 * eps + static_cast<double>(d) * d * eps * eps);
}

double measurement_overlap_tol(double eps, int d) {
    if (eps < 0.0) throw std::invalid_argument("measurement_overlap_tol: eps < 0");
    return eps + (1.0 + d * eps) *
                     std::sqrt(2.0 * eps + static_cast<double>(d) * d * eps * eps);
}

QubitRefinement qubit_refinements(double eps) {
    if (eps < 0.0) throw std::invalid_argument("qubit_refinements: eps < 0");
    QubitRefinement r{};
    if (eps <= 1.0 / 3.0) {
        r.norm_lower = (1.0 - 2.0 * eps) / (1.0 - eps);
        r.state_tol = eps + std::sqrt(eps);
        r.meas_tol = eps + (1.0 + eps) * std::sqrt(eps);
        r.effect_gap = std::sqrt(eps);
        r.fallback = false;
    } else {
        // Generic d=2 values: per-effect norm >= 1-eps gives a per-state
        // norm floor of 1-3*eps, and the effect gap follows from the
        // Frobenius estimate behind the generic overlap tolerance.
        r.norm_lower = std::max(0.0, 1.0 - 3.0 * eps);
        r.state_tol = state_overlap_tol(eps, 2);
        r.meas_tol = measurement_overlap_tol(eps, 2);
        r.effect_gap = std::sqrt(2.0 * eps + 4.0 * eps * eps);
        r.fallback = true;
    }
    return r;
}

OverlapCertificate certify(const StatTable& observed, const PmScenario& scenario) {
    OverlapCertificate cert{};
    cert.epsilon = deviation_epsilon(observed, scenario);
    cert.d = scenario.dim();
    cert.purity_lower = purity_bound(cert.epsilon, cert.d);
    cert.projectivity_lower = projectivity_bound(cert.epsilon, cert.d);
    cert.state_tol_general = state_overlap_tol(cert.epsilon, cert.d);
    cert.meas_tol_general = measurement_overlap_tol(cert.epsilon, cert.d);

    double stol = cert.state_tol_general;
    double mtol = cert.meas_tol_general;
    if (cert.d == 2) {
        cert.qubit = qubit_refinements(cert.epsilon);
        if (!cert.qubit->fallback) {
            stol = cert.qubit->state_tol;
            mtol = cert.qubit->meas_tol;
        }
    }
    cert.state_overlap_tolerance = stol;
    cert.measurement_overlap_tolerance = mtol;

    const int n = scenario.settings(), d = scenario.dim();
    for (int x = 0; x < n; ++x)
        for (int a = 0; a < d; ++a)
            for (int x2 = x; x2 < n; ++x2)
                for (int a2 = (x2 == x ? a + 1 : 0); a2 < d; ++a2) {
                    PairInterval pi{};
                    pi.x = x;
                    pi.a = a;
                    pi.x2 = x2;
                    pi.a2 = a2;
                    pi.target = fidelity_linear(scenario.state(x, a), scenario.state(x2, a2));
                    pi.same_setting = (x == x2);
                    pi.beyond_stated_scope = (x != x2 && a == a2);
                    pi.state_lo = std::max(0.0, pi.target - stol);
                    pi.state_hi = std::min(1.0, pi.target + stol);
                    pi.meas_lo = std::max(0.0, pi.target - mtol);
                    pi.meas_hi = std::min(1.0, pi.target + mtol);
                    cert.pairs.push_back(pi);
                }
    return cert;
}

std::pair<PmScenario, ExperimentalRealization> tightness_fixture_qubit(double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("tightness_fixture_qubit: need 0 < eps < 1/2");

    ComplexVector zero(2), one(2), plus(2), minus(2), tilde0(2), tildep(2);
    zero << 1, 0;
    one << 0, 1;
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    tilde0 = std::sqrt(1.0 - eps) * zero + std::sqrt(eps) * one;
    tildep = std::sqrt(1.0 - eps) * plus + std::sqrt(eps) * minus;

    const ComplexMatrix id = complex_identity(2);
    const ComplexMatrix p_tilde0 = tilde0 * tilde0.adjoint();
    const ComplexMatrix p_tildep = tildep * tildep.adjoint();

    // Targets: first basis around the eps-rotated |0>, second around |+>.
    std::vector<QuantumState> targets;
    targets.emplace_back(p_tilde0);
    targets.emplace_back(ComplexMatrix(id - p_tilde0));
    targets.push_back(QuantumState::pure(plus));
    targets.push_back(QuantumState::pure(minus));
    PmScenario scenario(2, 2, std::move(targets));

    // Experimental side: exact computational and +/- bases, measurements
    // rotated the other way.
    std::vector<QuantumState> states;
    states.push_back(QuantumState::pure(zero));
    states.push_back(QuantumState::pure(one));
    states.push_back(QuantumState::pure(plus));
    states.push_back(QuantumState::pure(minus));
    std::vector<Povm> meas;
    meas.emplace_back(std::vector<ComplexMatrix>{p_tilde0, id - p_tilde0});
    meas.emplace_back(std::vector<ComplexMatrix>{p_tildep, id - p_tildep});
    ExperimentalRealization real(2, 2, std::move(states), std::move(meas));

    return {std::move(scenario), std::move(real)};
}

Povm tightness_fixture_dim(double eps, int d) {
    if (d < 2) throw std::invalid_argument("tightness_fixture_dim: d < 2");
    if (!(eps > 0.0 && eps < 1.0 / (d - 1)))
        throw std::invalid_argument("tightness_fixture_dim: need 0 < eps < 1/(d-1)");

    ComplexVector coherent = ComplexVector::Zero(d);
    for (int a = 1; a < d; ++a) coherent(a) = 1.0 / std::sqrt(static_cast<double>(d - 1));

    const double delta =
        1.0 / std::sqrt(static_cast<double>(d - 1)) + std::sqrt(1.0 / (d - 1) - eps);

    std::vector<ComplexMatrix> effects;
    ComplexVector e0 = ComplexVector::Zero(d);
    e0(0) = 1.0;
    effects.push_back(e0 * e0.adjoint() +
                      eps * (d - 1) * (coherent * coherent.adjoint()));
    for (int a = 1; a < d; ++a) {
        ComplexVector v = ComplexVector::Zero(d);
        v(a) = 1.0;
        v -= delta * coherent;
        effects.push_back(v * v.adjoint());
    }
    return Povm(std::move(effects));
}

}  // namespace pmcert
