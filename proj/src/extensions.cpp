#include "pmcert/extensions.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <map>
#include <tuple>

namespace pmcert {

namespace {

constexpr double kSingularRatioTol = 1e-8;  // extremality/IC threshold
constexpr double kSicEntryTol = 1e-9;
constexpr double kOrthogonalTol = 1e-12;

}  // namespace

MomentMatrix moment_matrix_from_stats(const RealMatrix& state_overlaps,
                                      const std::vector<double>& alphas, int d) {
    const int m = static_cast<int>(alphas.size());
    if (state_overlaps.rows() != m || state_overlaps.cols() != m)
        throw std::invalid_argument("moment_matrix_from_stats: shape mismatch");
    double total = 0.0;
    for (double a : alphas) {
        if (!(a > 0.0 && a <= 1.0))
            throw std::invalid_argument("moment_matrix_from_stats: alpha outside (0,1]");
        total += a;
    }
    if (std::abs(total - d) > 1e-6)
        throw std::invalid_argument("moment_matrix_from_stats: effect weights do not sum to d");
    for (int i = 0; i < m; ++i)
        if (std::abs(state_overlaps(i, i) - 1.0) > 1e-9)
            throw std::invalid_argument("moment_matrix_from_stats: diagonal overlaps must be 1");

    MomentMatrix mm;
    mm.m = m;
    mm.gamma.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            mm.gamma(i, j) = alphas[i] * alphas[j] *
                             0.5 * (state_overlaps(i, j) + state_overlaps(j, i));
    return mm;
}

PovmCertificate certify_povm(const MomentMatrix& mm, int d) {
    if (mm.m < d) throw std::invalid_argument("certify_povm: fewer effects than dimension");
    PovmCertificate cert{};

    Eigen::JacobiSVD<RealMatrix> svd(mm.gamma);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    cert.min_singular_value = smin;
    const bool nonsingular = smax > 0.0 && smin >= kSingularRatioTol * smax;

    Eigen::SelfAdjointEigenSolver<RealMatrix> es(mm.gamma, Eigen::EigenvaluesOnly);
    const bool psd = es.eigenvalues().minCoeff() >= -1e-9 * std::max(1.0, smax);
    double weight_sum = 0.0;
    bool diag_ok = true;
    for (int i = 0; i < mm.m; ++i) {
        if (mm.gamma(i, i) < 0.0) diag_ok = false;
        weight_sum += std::sqrt(std::max(0.0, mm.gamma(i, i)));
    }
    cert.is_rank1_consistent = psd && diag_ok && std::abs(weight_sum - d) < 1e-6;

    cert.is_extremal = nonsingular && mm.m <= d * d;
    cert.is_ic = nonsingular && mm.m == d * d;

    // Symmetric informationally complete relation: off-diagonal overlaps
    // 1/(d^2(d+1)) and diagonal weights 1/d^2.
    if (cert.is_ic) {
        const double off = 1.0 / (static_cast<double>(d) * d * (d + 1));
        const double diag = 1.0 / (static_cast<double>(d) * d);
        bool sic = true;
        for (int i = 0; i < mm.m && sic; ++i)
            for (int j = 0; j < mm.m && sic; ++j) {
                const double want = (i == j) ? diag : off;
                if (std::abs(mm.gamma(i, j) - want) > kSicEntryTol) sic = false;
            }
        cert.is_sic = sic;
    }
    return cert;
}

double verify_povm_scheme_stats(const std::vector<std::vector<QuantumState>>& bases,
                                const Povm& n) {
    const int m = n.outcomes();
    if (static_cast<int>(bases.size()) != m)
        throw std::invalid_argument("verify_povm_scheme_stats: need one basis per effect");
    const int d = n.dim();
    double residual = 0.0;
    for (int b = 0; b < m; ++b) {
        if (static_cast<int>(bases[b].size()) != d)
            throw std::invalid_argument("verify_povm_scheme_stats: basis size mismatch");
        for (int a = 1; a < d; ++a)
            residual = std::max(
                residual, std::abs((bases[b][a].matrix() * n.effect(b)).trace().real()));
    }
    for (int x = 0; x < m; ++x)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                const double want = (a == b) ? 1.0 : 0.0;
                residual = std::max(
                    residual, std::abs(fidelity_linear(bases[x][a], bases[x][b]) - want));
            }
    return residual;
}

IntermediatePair intermediate_state(const QuantumState& r1, const QuantumState& r2) {
    if (r1.dim() != r2.dim())
        throw std::invalid_argument("intermediate_state: dimension mismatch");
    if (std::abs(r1.purity() - 1.0) > 1e-8 || std::abs(r2.purity() - 1.0) > 1e-8)
        throw std::invalid_argument("intermediate_state: states must be pure");
    const double overlap = fidelity_linear(r1, r2);
    if (overlap <= kOrthogonalTol)
        throw std::invalid_argument("intermediate_state: orthogonal pair has no unique maximizer");

    // Top eigenvector of r1 + r2: the unique pure state attaining
    // tr(rho_z (r1 + r2)) = 1 + sqrt(tr(r1 r2)). The pair spans a two
    // dimensional subspace, so this works in any dimension.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r1.matrix() + r2.matrix());
    const auto top = es.eigenvalues().size() - 1;
    IntermediatePair out{QuantumState::pure(es.eigenvectors().col(top)),
                         1.0 + std::sqrt(overlap)};
    return out;
}

double check_sr_identity(const StatTable& stats) {
    if (!stats.has_z_entries())
        throw std::invalid_argument("check_sr_identity: table has no intermediate rows");

    // Group rows by pair label and pick out p(a|z,x) and p(a'|z,x').
    struct Pair {
        bool have1 = false, have2 = false;
        double p1 = 0.0, p2 = 0.0;
    };
    std::map<std::tuple<int, int, int, int>, Pair> groups;
    for (const auto& e : stats.z_entries()) {
        auto& g = groups[{e.x, e.a, e.x2, e.a2}];
        if (e.y == e.x && e.b == e.a) {
            g.p1 = e.p;
            g.have1 = true;
        } else if (e.y == e.x2 && e.b == e.a2) {
            g.p2 = e.p;
            g.have2 = true;
        }
    }
    double residual = 0.0;
    bool any = false;
    for (const auto& [key, g] : groups) {
        if (!g.have1 || !g.have2) continue;
        any = true;
        const auto [x, a, x2, a2] = key;
        const double cross = stats.p(x, a, x2, a2);
        residual = std::max(residual, std::abs(g.p1 + g.p2 - 1.0 - std::sqrt(cross)));
    }
    if (!any)
        throw std::invalid_argument("check_sr_identity: no complete intermediate row pair");
    return residual;
}

void append_intermediate_entries(StatTable& table, const PmScenario& s) {
    if (table.settings() != s.settings() || table.dim() != s.dim())
        throw std::invalid_argument("append_intermediate_entries: shape mismatch");
    const int n = s.settings(), d = s.dim();
    for (int x = 0; x < n; ++x)
        for (int a = 0; a < d; ++a)
            for (int x2 = x + 1; x2 < n; ++x2)
                for (int a2 = 0; a2 < d; ++a2) {
                    if (a2 == a) continue;
                    const double overlap = fidelity_linear(s.state(x, a), s.state(x2, a2));
                    if (overlap <= kOrthogonalTol) continue;
                    const auto ip = intermediate_state(s.state(x, a), s.state(x2, a2));
                    for (int y : {x, x2})
                        for (int b = 0; b < d; ++b)
                            table.append_z_entry(
                                {x, a, x2, a2, y, b,
                                 fidelity_linear(ip.z_state, s.state(y, b))});
                }
}

StatTable flip_adversary_table() {
    // Two settings, one shared bit lambda with equal weights. Both devices
    // use the computational basis; for lambda = 1 the x = 2 preparations and
    // y = 2 outcomes are flipped. The averaged table shows perfect
    // correlations at y = x and cross probabilities 1/2.
    const int n = 2, d = 2;
    std::vector<double> probs(n * d * n * d);
    auto idx = [&](int x, int a, int y, int b) { return ((x * d + a) * n + y) * d + b; };
    for (int x = 0; x < n; ++x)
        for (int a = 0; a < d; ++a)
            for (int y = 0; y < n; ++y)
                for (int b = 0; b < d; ++b)
                    probs[idx(x, a, y, b)] =
                        (x == y) ? (a == b ? 1.0 : 0.0) : 0.5;

    // Intermediate rows: the attacker's best static choice is the
    // computational state matching outcome a, giving
    // p(a|z,x) + p(a'|z,x') = 3/2 regardless of lambda.
    std::vector<StatTable::ZEntry> z;
    for (int a = 0; a < d; ++a)
        for (int a2 = 0; a2 < d; ++a2) {
            if (a2 == a) continue;
            // p(b|z,y) averaged over lambda for rho_z = |a><a|.
            for (int y = 0; y < n; ++y)
                for (int b = 0; b < d; ++b) {
                    const double p_l0 = (b == a) ? 1.0 : 0.0;
                    const double p_l1 = (y == 1) ? ((b == (1 - a)) ? 1.0 : 0.0)
                                                 : ((b == a) ? 1.0 : 0.0);
                    z.push_back({0, a, 1, a2, y, b, 0.5 * (p_l0 + p_l1)});
                }
        }
    return StatTable(n, d, std::move(probs), std::move(z));
}

}  // namespace pmcert
