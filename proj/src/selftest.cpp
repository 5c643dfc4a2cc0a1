#include "pmcert/selftest.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace pmcert {

namespace {

constexpr double kReconstructionTol = 1e-8;
constexpr double kRankTol = 1e-8;

double eps_term(double eps) {
    return eps * (1.0 - 2.0 * eps) / ((1.0 - eps) * (1.0 - eps));
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

/// Root of a strictly increasing function on [lo, hi] by bisection.
template <typename F>
double bisect_increasing(F f, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

SubsetSelection build_selection(const PmScenario& s, const std::vector<int>& subset,
                                const std::vector<Bloch>& primary,
                                const RealMatrix& span_basis) {
    SubsetSelection sel;
    sel.settings = subset;
    sel.k = static_cast<int>(subset.size());
    sel.span_basis = span_basis;

    sel.gram.resize(sel.k, sel.k);
    for (int i = 0; i < sel.k; ++i)
        for (int j = 0; j < sel.k; ++j)
            sel.gram(i, j) = primary[subset[i]].dot(primary[subset[j]]);
    sel.chol = cholesky_lower(sel.gram);

    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sel.gram, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    sel.gram_norm = lmax;
    sel.gram_fro = sel.gram.norm();
    sel.chol_norm = std::sqrt(lmax);
    sel.gram_inv_norm = 1.0 / lmin;

    // Decomposition coefficients of every off-subset Bloch vector in the
    // basis of the selected ones, from Gamma c = g.
    const int n = s.settings();
    Eigen::LLT<RealMatrix> llt(sel.gram);
    for (int x = 0; x < n; ++x) {
        if (std::find(subset.begin(), subset.end(), x) != subset.end()) continue;
        for (int a = 0; a < 2; ++a) {
            const Bloch target = s.state(x, a).bloch();
            RealVector g(sel.k);
            for (int i = 0; i < sel.k; ++i) g(i) = target.dot(primary[subset[i]]);
            const RealVector c = llt.solve(g);
            Bloch rec = Bloch::Zero();
            for (int i = 0; i < sel.k; ++i) rec += c(i) * primary[subset[i]];
            if ((rec - target).norm() > kReconstructionTol)
                throw std::invalid_argument(
                    "select_subset: off-subset Bloch vector not reconstructible from the "
                    "selected span");
            sel.coeffs[{x, a}] = c;
        }
    }
    return sel;
}

}  // namespace

bool SubsetSelection::in_subset(int x) const {
    return std::find(settings.begin(), settings.end(), x) != settings.end();
}

double gram_deviation_frobenius(double eps, int m) {
    if (m < 2) throw std::invalid_argument("gram_deviation_frobenius: m < 2");
    if (eps < 0.0) throw std::invalid_argument("gram_deviation_frobenius: eps < 0");
    const double md = m;
    return std::sqrt(4.0 * md * (md - 1.0) * eps *
                     (1.0 + 2.0 * std::sqrt(eps) + (md + 3.0) / (md - 1.0) * eps));
}

double f_k(double eps, int k) {
    if (k != 2 && k != 3) throw std::invalid_argument("f_k: k must be 2 or 3");
    return gram_deviation_frobenius(eps, k);
}

double o_k(double eps, int k) {
    if (k != 2 && k != 3) throw std::invalid_argument("o_k: k must be 2 or 3");
    if (eps < 0.0) throw std::invalid_argument("o_k: eps < 0");
    return 2.0 * ((k - 1) * std::sqrt(eps) + (k + 1) * eps);
}

SubsetSelection select_subset(const PmScenario& s, std::optional<double> eps) {
    if (s.dim() != 2) throw std::invalid_argument("select_subset: d != 2");
    const std::vector<Bloch> primary = s.primary_bloch();
    const int n = s.settings();

    RealMatrix rows(n, 3);
    for (int x = 0; x < n; ++x) rows.row(x) = primary[x].transpose();
    Eigen::JacobiSVD<RealMatrix> svd(rows, Eigen::ComputeFullV);
    int k = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > kRankTol * svd.singularValues()(0)) ++k;
    if (k < 2)
        throw std::invalid_argument(
            "select_subset: all primary Bloch vectors collinear; scheme inapplicable");
    k = std::min(k, 3);

    // Orthonormal span basis via Gram-Schmidt on the first k independent vectors.
    RealMatrix basis(3, k);
    int filled = 0;
    for (int x = 0; x < n && filled < k; ++x) {
        Bloch v = primary[x];
        for (int j = 0; j < filled; ++j) v -= v.dot(basis.col(j)) * Bloch(basis.col(j));
        if (v.norm() > kRankTol) basis.col(filled++) = v / v.norm();
    }
    if (filled < k) throw std::invalid_argument("select_subset: span construction failed");

    SubsetSelection best;
    double best_score = 0.0;
    bool have = false;
    for (const auto& subset : subsets_of_size(n, k)) {
        SubsetSelection cand;
        try {
            cand = build_selection(s, subset, primary, basis);
        } catch (const NotPositiveDefinite&) {
            continue;  // singular Gram
        }
        const double limit = validity_limit(cand);
        const double eps_ref = eps ? std::min(*eps, 0.5 * limit) : 0.5 * limit;
        double score;
        try {
            score = e_sk(std::min(eps_ref, 0.999 * limit), cand);
        } catch (const ValidityExceeded&) {
            continue;
        }
        if (!have || score < best_score - 1e-15) {
            best = cand;
            best_score = score;
            have = true;
        }
    }
    if (!have) throw std::invalid_argument("select_subset: no subset with nonsingular Gram");
    return best;
}

double e_sk(double eps, const SubsetSelection& sel) {
    if (eps < 0.0) throw std::invalid_argument("e_sk: eps < 0");
    const double cond = sel.gram_inv_norm * o_k(eps, sel.k);
    if (cond >= 1.0)
        throw ValidityExceeded("e_sk: ||Gamma^-1|| O_k(eps) >= 1");
    const double mixing = std::min(sel.gram_norm / sel.gram_fro,
                                   sel.chol_norm / std::sqrt(static_cast<double>(sel.k)));
    return (1.0 / (2.0 * std::sqrt(2.0))) * sel.gram_inv_norm * f_k(eps, sel.k) /
           std::sqrt(1.0 - cond) * mixing;
}

double validity_limit(const SubsetSelection& sel) {
    return bisect_increasing(
        [&](double e) { return sel.gram_inv_norm * o_k(e, sel.k) - 1.0; }, 0.0, 1.0);
}

TraceDistanceBounds trace_distance_bounds(double eps, const SubsetSelection& sel,
                                          const PmScenario& s) {
    const double e = e_sk(eps, sel);  // throws when outside the kernel region
    TraceDistanceBounds td;
    td.in_subset_a1_avg = e;
    td.in_subset_a2_avg = e + 2.0 * std::sqrt(eps);
    const double cond = sel.gram_inv_norm * o_k(eps, sel.k);
    const double ratio = cond / (1.0 - cond);
    const double sk = std::sqrt(static_cast<double>(sel.k));
    for (const auto& [key, c] : sel.coeffs) {
        const double cn = c.norm();
        td.off_subset[key] = sk * cn * e + 0.5 * sk * (cn + sk / (sel.k - 1)) * ratio;
    }
    (void)s;
    return td;
}

MeasurementBounds measurement_bounds(double eps, const SubsetSelection& sel,
                                     const PmScenario& s) {
    const TraceDistanceBounds td = trace_distance_bounds(eps, sel, s);
    MeasurementBounds mb;
    mb.in_subset_avg = td.in_subset_a1_avg + std::sqrt(eps);
    for (int y = 0; y < s.settings(); ++y) {
        if (sel.in_subset(y)) continue;
        mb.off_subset[y] = td.off_subset.at({y, 0}) + std::sqrt(eps);
    }
    return mb;
}

namespace {

struct FidelityParts {
    double a1, a2;                                   // averages over the subset
    std::map<std::pair<int, int>, double> off;       // per off-subset state
    double meas_in;                                  // average over subset settings
    std::map<int, double> meas_off;                  // per off-subset setting
    double state_avg;                                // scenario-wide average
    double meas_avg;
};

FidelityParts fidelity_parts(double eps, const SubsetSelection& sel, const PmScenario& s) {
    const double e = e_sk(eps, sel);
    const double se = std::sqrt(eps);
    const double et = eps_term(eps);
    const TraceDistanceBounds td = trace_distance_bounds(eps, sel, s);

    FidelityParts p{};
    p.a1 = 1.0 - et - e * e;
    p.a2 = 1.0 - et - (e + 2.0 * se) * (e + 2.0 * se);
    p.meas_in = 1.0 - 2.5 * eps - (std::sqrt(2.0) * e + se) * (std::sqrt(2.0) * e + se);

    const int n = s.settings();
    double state_sum = sel.k * (p.a1 + p.a2);
    double meas_sum = sel.k * p.meas_in;
    for (const auto& [key, bound] : td.off_subset) {
        const double f = 1.0 - et - bound * bound;
        p.off[key] = f;
        state_sum += f;
    }
    for (int y = 0; y < n; ++y) {
        if (sel.in_subset(y)) continue;
        const double tdb = td.off_subset.at({y, 0});
        const double f = 1.0 - eps - (tdb + se) * (tdb + se);
        p.meas_off[y] = f;
        meas_sum += f;
    }
    p.state_avg = state_sum / (2.0 * n);
    p.meas_avg = meas_sum / n;
    return p;
}

}  // namespace

double avg_state_fidelity_lower_raw(double eps, const SubsetSelection& sel,
                                    const PmScenario& s) {
    return fidelity_parts(eps, sel, s).state_avg;
}

double avg_meas_fidelity_lower_raw(double eps, const SubsetSelection& sel,
                                   const PmScenario& s) {
    return fidelity_parts(eps, sel, s).meas_avg;
}

double epsilon0(const SubsetSelection& sel, const PmScenario& s) {
    const double pole = validity_limit(sel);
    double hi = pole * (1.0 - 1e-12);
    // The bound diverges to -inf at the pole; find a sign change.
    while (avg_state_fidelity_lower_raw(hi, sel, s) > 0.0) {
        hi = 0.5 * (hi + pole);
        if (pole - hi < 1e-15) return pole;
    }
    return bisect_increasing(
        [&](double e) { return -avg_state_fidelity_lower_raw(e, sel, s); }, 0.0, hi);
}

SelfTestBounds fidelity_bounds(double eps, const SubsetSelection& sel, const PmScenario& s) {
    SelfTestBounds b;
    b.epsilon = eps;
    b.validity_limit = validity_limit(sel);
    b.epsilon0 = epsilon0(sel, s);
    b.valid = eps < b.epsilon0;
    b.subset = sel.settings;
    b.k = sel.k;
    if (!b.valid) return b;

    b.e_value = e_sk(eps, sel);
    b.td = trace_distance_bounds(eps, sel, s);
    b.meas = measurement_bounds(eps, sel, s);
    // Trace-distance style bounds clipped to [0,1]; vacuous values flagged.
    auto clip_td = [&b](double v) {
        if (v > 1.0) b.vacuous_state = true;
        return std::min(1.0, v);
    };
    b.td->in_subset_a1_avg = clip_td(b.td->in_subset_a1_avg);
    b.td->in_subset_a2_avg = clip_td(b.td->in_subset_a2_avg);
    for (auto& [key, v] : b.td->off_subset) v = clip_td(v);

    const FidelityParts p = fidelity_parts(eps, sel, s);
    auto clip_fid = [](double v, bool* flag) {
        if (v < 0.0) *flag = true;
        return clamp01(v);
    };
    b.fid_in_subset_a1 = clip_fid(p.a1, &b.vacuous_state);
    b.fid_in_subset_a2 = clip_fid(p.a2, &b.vacuous_state);
    for (const auto& [key, v] : p.off) b.fid_off_subset[key] = clip_fid(v, &b.vacuous_state);
    b.fid_meas_in_subset = clip_fid(p.meas_in, &b.vacuous_meas);
    for (const auto& [key, v] : p.meas_off)
        b.fid_meas_off_subset[key] = clip_fid(v, &b.vacuous_meas);
    b.avg_state_fidelity_lower = clip_fid(p.state_avg, &b.vacuous_state);
    b.avg_meas_fidelity_lower = clip_fid(p.meas_avg, &b.vacuous_meas);
    return b;
}

double asymptotic_constant(const PmScenario& s, const SubsetSelection& sel) {
    // Deficit slope with the sqrt(eps) correction removed by Richardson
    // extrapolation: slope(e) = C + a sqrt(e) + O(e).
    const double e1 = 1e-7;
    const double s1 = (1.0 - avg_state_fidelity_lower_raw(e1, sel, s)) / e1;
    const double s2 = (1.0 - avg_state_fidelity_lower_raw(e1 / 2.0, sel, s)) / (e1 / 2.0);
    return s2 - (s1 - s2) / (std::sqrt(2.0) - 1.0);
}

std::vector<SweepRow> sweep(const PmScenario& s, const std::vector<double>& grid) {
    const SubsetSelection sel = select_subset(s);
    const double e0 = epsilon0(sel, s);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double eps : grid) {
        if (eps < 0.0 || eps >= e0)
            throw std::invalid_argument("sweep: grid point outside [0, epsilon0)");
        const FidelityParts p = fidelity_parts(eps, sel, s);
        SweepRow r{};
        r.epsilon = eps;
        r.fid_a1 = clamp01(p.a1);
        r.fid_a2 = clamp01(p.a2);
        r.fid_meas = clamp01(p.meas_avg);
        r.valid = true;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace pmcert
