#include "pmcert/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "pmcert/rng.hpp"

namespace pmcert {

namespace {

constexpr double kPurityTol = 1e-8;
constexpr double kCompletenessTol = 1e-8;
constexpr double kNormalizationTol = 1e-8;

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace

PmScenario::PmScenario(int n, int d, std::vector<QuantumState> states)
    : n_(n), d_(d), states_(std::move(states)) {
    if (n_ < 1 || d_ < 2) throw std::invalid_argument("PmScenario: need n >= 1, d >= 2");
    if (states_.size() != static_cast<std::size_t>(n_) * d_)
        throw std::invalid_argument("PmScenario: wrong number of states");
    for (int x = 0; x < n_; ++x) {
        ComplexMatrix sum = ComplexMatrix::Zero(d_, d_);
        for (int a = 0; a < d_; ++a) {
            const QuantumState& s = state(x, a);
            if (s.dim() != d_) throw std::invalid_argument("PmScenario: state dimension mismatch");
            if (std::abs(s.purity() - 1.0) > kPurityTol)
                throw std::invalid_argument("PmScenario: target state not pure");
            sum += s.matrix();
        }
        if ((sum - complex_identity(d_)).cwiseAbs().maxCoeff() > kCompletenessTol)
            throw std::invalid_argument("PmScenario: setting states do not resolve the identity");
    }
}

Povm PmScenario::measurement(int y) const {
    std::vector<ComplexMatrix> effects;
    effects.reserve(d_);
    for (int a = 0; a < d_; ++a) effects.push_back(state(y, a).matrix());
    return Povm(std::move(effects));
}

std::vector<Bloch> PmScenario::primary_bloch() const {
    if (d_ != 2) throw std::invalid_argument("primary_bloch: d != 2");
    std::vector<Bloch> v;
    v.reserve(n_);
    for (int x = 0; x < n_; ++x) v.push_back(state(x, 0).bloch());
    return v;
}

StatTable::StatTable(int n, int d, std::vector<double> probs, std::vector<ZEntry> z_entries)
    : n_(n), d_(d), probs_(std::move(probs)), z_(std::move(z_entries)) {
    if (probs_.size() != static_cast<std::size_t>(n_) * d_ * n_ * d_)
        throw std::invalid_argument("StatTable: wrong entry count");
    for (double v : probs_)
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
            throw std::invalid_argument("StatTable: probability outside [0,1]");
    for (int x = 0; x < n_; ++x)
        for (int a = 0; a < d_; ++a)
            for (int y = 0; y < n_; ++y) {
                double s = 0.0;
                for (int b = 0; b < d_; ++b) s += p(x, a, y, b);
                if (std::abs(s - 1.0) > kNormalizationTol)
                    throw std::invalid_argument("StatTable: row not normalized");
            }
    for (const ZEntry& e : z_) {
        if (e.x < 0 || e.x >= n_ || e.x2 < 0 || e.x2 >= n_ || e.a < 0 || e.a >= d_ ||
            e.a2 < 0 || e.a2 >= d_ || e.y < 0 || e.y >= n_ || e.b < 0 || e.b >= d_)
            throw std::invalid_argument("StatTable: intermediate row index out of range");
        if (!(e.p >= -1e-12 && e.p <= 1.0 + 1e-12))
            throw std::invalid_argument("StatTable: intermediate probability outside [0,1]");
    }
}

ExperimentalRealization::ExperimentalRealization(int n, int d,
                                                 std::vector<QuantumState> states,
                                                 std::vector<Povm> measurements)
    : n_(n), d_(d), states_(std::move(states)), meas_(std::move(measurements)) {
    if (states_.size() != static_cast<std::size_t>(n_) * d_)
        throw std::invalid_argument("ExperimentalRealization: wrong number of states");
    if (meas_.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("ExperimentalRealization: wrong number of measurements");
    for (const auto& s : states_)
        if (s.dim() != d_) throw std::invalid_argument("ExperimentalRealization: state dim");
    for (const auto& m : meas_)
        if (m.dim() != d_ || m.outcomes() != d_)
            throw std::invalid_argument("ExperimentalRealization: measurement shape");
}

ExperimentalRealization ExperimentalRealization::from_scenario(const PmScenario& s) {
    std::vector<QuantumState> states;
    std::vector<Povm> meas;
    for (int x = 0; x < s.settings(); ++x)
        for (int a = 0; a < s.dim(); ++a) states.push_back(s.state(x, a));
    for (int y = 0; y < s.settings(); ++y) meas.push_back(s.measurement(y));
    return ExperimentalRealization(s.settings(), s.dim(), std::move(states), std::move(meas));
}

std::optional<NoiseKind> noise_kind_from_string(const std::string& s) {
    if (s == "unitary") return NoiseKind::GlobalUnitary;
    if (s == "depolarize") return NoiseKind::Depolarize;
    if (s == "bloch-rotate") return NoiseKind::BlochRotate;
    if (s == "smear") return NoiseKind::EffectSmear;
    return std::nullopt;
}

std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::GlobalUnitary: return "unitary";
        case NoiseKind::Depolarize: return "depolarize";
        case NoiseKind::BlochRotate: return "bloch-rotate";
        case NoiseKind::EffectSmear: return "smear";
    }
    return "?";
}

namespace {

template <typename StateAt, typename EffectAt>
StatTable born_table_impl(int n, int d, StateAt state_at, EffectAt effect_at) {
    std::vector<double> probs(static_cast<std::size_t>(n) * d * n * d);
    std::size_t idx = 0;
    for (int x = 0; x < n; ++x)
        for (int a = 0; a < d; ++a)
            for (int y = 0; y < n; ++y)
                for (int b = 0; b < d; ++b)
                    probs[idx++] = clamp01((state_at(x, a) * effect_at(y, b)).trace().real());
    return StatTable(n, d, std::move(probs));
}

}  // namespace

StatTable born_table(const PmScenario& s) {
    return born_table_impl(
        s.settings(), s.dim(),
        [&](int x, int a) -> const ComplexMatrix& { return s.state(x, a).matrix(); },
        [&](int y, int b) -> const ComplexMatrix& { return s.state(y, b).matrix(); });
}

StatTable born_table(const ExperimentalRealization& r) {
    return born_table_impl(
        r.settings(), r.dim(),
        [&](int x, int a) -> const ComplexMatrix& { return r.state(x, a).matrix(); },
        [&](int y, int b) -> const ComplexMatrix& { return r.measurement(y).effect(b); });
}

double deviation_epsilon(const StatTable& observed, const PmScenario& scenario) {
    if (observed.settings() != scenario.settings() || observed.dim() != scenario.dim())
        throw std::invalid_argument("deviation_epsilon: index sets do not match");
    const StatTable target = born_table(scenario);
    double eps = 0.0;
    const int n = scenario.settings(), d = scenario.dim();
    for (int x = 0; x < n; ++x)
        for (int a = 0; a < d; ++a)
            for (int y = 0; y < n; ++y)
                for (int b = 0; b < d; ++b)
                    eps = std::max(eps, std::abs(observed.p(x, a, y, b) - target.p(x, a, y, b)));
    return eps;
}

ExperimentalRealization perturb(const PmScenario& s, const NoiseSpec& noise,
                                std::uint64_t seed) {
    if (noise.delta < 0.0) throw std::invalid_argument("perturb: delta < 0");
    const int n = s.settings(), d = s.dim();
    Rng rng(seed);

    std::vector<QuantumState> states;
    std::vector<Povm> meas;
    states.reserve(static_cast<std::size_t>(n) * d);
    meas.reserve(n);

    switch (noise.kind) {
        case NoiseKind::GlobalUnitary: {
            if (d != 2) throw std::invalid_argument("perturb: unitary noise implemented for d=2");
            const ComplexMatrix u = rng.haar_qubit_unitary();
            for (int x = 0; x < n; ++x)
                for (int a = 0; a < d; ++a)
                    states.emplace_back(ComplexMatrix(u * s.state(x, a).matrix() * u.adjoint()));
            for (int y = 0; y < n; ++y) {
                std::vector<ComplexMatrix> effects;
                for (int b = 0; b < d; ++b)
                    effects.emplace_back(u * s.state(y, b).matrix() * u.adjoint());
                meas.emplace_back(std::move(effects));
            }
            break;
        }
        case NoiseKind::Depolarize: {
            if (noise.delta > 1.0) throw std::invalid_argument("perturb: delta > 1");
            const ComplexMatrix mix = complex_identity(d) / static_cast<double>(d);
            for (int x = 0; x < n; ++x)
                for (int a = 0; a < d; ++a)
                    states.emplace_back(ComplexMatrix(
                        (1.0 - noise.delta) * s.state(x, a).matrix() + noise.delta * mix));
            for (int y = 0; y < n; ++y) meas.push_back(s.measurement(y));
            break;
        }
        case NoiseKind::BlochRotate: {
            if (d != 2) throw std::invalid_argument("perturb: bloch-rotate needs d=2");
            for (int x = 0; x < n; ++x)
                for (int a = 0; a < d; ++a) {
                    const RealMatrix r = rng.small_rotation(noise.delta);
                    states.push_back(QuantumState::from_bloch(r * s.state(x, a).bloch()));
                }
            // One rigid rotation per setting keeps each POVM resolving the identity.
            for (int y = 0; y < n; ++y) {
                const RealMatrix r = rng.small_rotation(noise.delta);
                std::vector<ComplexMatrix> effects;
                for (int b = 0; b < d; ++b)
                    effects.push_back(
                        QuantumState::from_bloch(r * s.state(y, b).bloch()).matrix());
                meas.emplace_back(std::move(effects));
            }
            break;
        }
        case NoiseKind::EffectSmear: {
            if (noise.delta > 1.0) throw std::invalid_argument("perturb: delta > 1");
            for (int x = 0; x < n; ++x)
                for (int a = 0; a < d; ++a) states.push_back(s.state(x, a));
            const ComplexMatrix mix = complex_identity(d) / static_cast<double>(d);
            for (int y = 0; y < n; ++y) {
                std::vector<ComplexMatrix> effects;
                for (int b = 0; b < d; ++b)
                    effects.emplace_back((1.0 - noise.delta) * s.state(y, b).matrix() +
                                         noise.delta * mix);
                meas.emplace_back(std::move(effects));
            }
            break;
        }
        default:
            throw std::invalid_argument("perturb: unknown noise kind");
    }
    return ExperimentalRealization(n, d, std::move(states), std::move(meas));
}

}  // namespace pmcert
