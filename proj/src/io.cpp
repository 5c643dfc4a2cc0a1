#include "pmcert/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pmcert {

namespace {

Json complex_matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(row);
    }
    return rows;
}

ComplexMatrix complex_matrix_from_json(const Json& j) {
    const auto r = j.size();
    if (r == 0) throw std::invalid_argument("matrix: empty");
    const auto c = j.at(0).size();
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < c; ++k)
            m(i, k) = Complex(j.at(i).at(k).at(0).get<double>(),
                              j.at(i).at(k).at(1).get<double>());
    return m;
}

}  // namespace

Json scenario_to_json(const PmScenario& s) {
    Json j;
    j["n"] = s.settings();
    j["d"] = s.dim();
    Json states = Json::array();
    for (int x = 0; x < s.settings(); ++x)
        for (int a = 0; a < s.dim(); ++a) {
            Json e;
            e["x"] = x + 1;
            e["a"] = a + 1;
            if (s.dim() == 2) {
                const Bloch n = s.state(x, a).bloch();
                e["bloch"] = Json::array({n.x(), n.y(), n.z()});
            } else {
                e["matrix"] = complex_matrix_to_json(s.state(x, a).matrix());
            }
            states.push_back(e);
        }
    j["states"] = states;
    return j;
}

PmScenario scenario_from_json(const Json& j) {
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    if (n < 1 || d < 2) throw std::invalid_argument("scenario: bad n or d");
    std::vector<std::optional<QuantumState>> slots(static_cast<std::size_t>(n) * d);
    for (const Json& e : j.at("states")) {
        const int x = e.at("x").get<int>() - 1;
        const int a = e.at("a").get<int>() - 1;
        if (x < 0 || x >= n || a < 0 || a >= d)
            throw std::invalid_argument("scenario: state index out of range");
        std::optional<QuantumState> st;
        if (e.contains("bloch")) {
            if (d != 2) throw std::invalid_argument("scenario: bloch entry needs d=2");
            const auto& b = e.at("bloch");
            st = QuantumState::from_bloch(
                Bloch(b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>()));
        } else if (e.contains("vector")) {
            const auto& v = e.at("vector");
            ComplexVector amp(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                amp(i) = Complex(v.at(i).at(0).get<double>(), v.at(i).at(1).get<double>());
            st = QuantumState::pure(amp);
        } else if (e.contains("matrix")) {
            st = QuantumState(complex_matrix_from_json(e.at("matrix")));
        } else {
            throw std::invalid_argument("scenario: state entry lacks bloch/vector/matrix");
        }
        if (slots[x * d + a]) throw std::invalid_argument("scenario: duplicate state entry");
        slots[x * d + a] = std::move(st);
    }
    std::vector<QuantumState> states;
    states.reserve(slots.size());
    for (auto& s : slots) {
        if (!s) throw std::invalid_argument("scenario: missing state entry");
        states.push_back(std::move(*s));
    }
    PmScenario scenario(n, d, std::move(states));

    // Optional measurements must match the scheme constraint M^x_a = rho^x_a.
    if (j.contains("measurements")) {
        for (const Json& e : j.at("measurements")) {
            const int y = e.at("y").get<int>() - 1;
            const auto& eff = e.at("effects");
            for (int b = 0; b < d; ++b) {
                const ComplexMatrix m = complex_matrix_from_json(eff.at(b));
                if ((m - scenario.state(y, b).matrix()).cwiseAbs().maxCoeff() > 1e-8)
                    throw std::invalid_argument(
                        "scenario: measurements deviate from the preparation states");
            }
        }
    }
    return scenario;
}

Json stat_table_to_json(const StatTable& t) {
    Json j;
    j["n"] = t.settings();
    j["d"] = t.dim();
    Json entries = Json::array();
    for (int x = 0; x < t.settings(); ++x)
        for (int a = 0; a < t.dim(); ++a)
            for (int y = 0; y < t.settings(); ++y)
                for (int b = 0; b < t.dim(); ++b) {
                    Json e;
                    e["x"] = x + 1;
                    e["a"] = a + 1;
                    e["y"] = y + 1;
                    e["b"] = b + 1;
                    e["p"] = t.p(x, a, y, b);
                    entries.push_back(e);
                }
    for (const auto& z : t.z_entries()) {
        Json e;
        e["z"] = Json::array({z.x + 1, z.a + 1, z.x2 + 1, z.a2 + 1});
        e["y"] = z.y + 1;
        e["b"] = z.b + 1;
        e["p"] = z.p;
        entries.push_back(e);
    }
    j["entries"] = entries;
    return j;
}

StatTable stat_table_from_json(const Json& j) {
    int n = 0, d = 0;
    if (j.contains("n") && j.contains("d")) {
        n = j.at("n").get<int>();
        d = j.at("d").get<int>();
    } else {
        // Infer the index ranges from the entries themselves.
        for (const Json& e : j.at("entries")) {
            if (e.contains("z")) continue;
            n = std::max({n, e.at("x").get<int>(), e.at("y").get<int>()});
            d = std::max({d, e.at("a").get<int>(), e.at("b").get<int>()});
        }
    }
    std::vector<double> probs(static_cast<std::size_t>(n) * d * n * d, -1.0);
    std::vector<StatTable::ZEntry> zrows;
    for (const Json& e : j.at("entries")) {
        if (e.contains("z")) {
            const auto& z = e.at("z");
            zrows.push_back({z.at(0).get<int>() - 1, z.at(1).get<int>() - 1,
                             z.at(2).get<int>() - 1, z.at(3).get<int>() - 1,
                             e.at("y").get<int>() - 1, e.at("b").get<int>() - 1,
                             e.at("p").get<double>()});
            continue;
        }
        const int x = e.at("x").get<int>() - 1;
        const int a = e.at("a").get<int>() - 1;
        const int y = e.at("y").get<int>() - 1;
        const int b = e.at("b").get<int>() - 1;
        if (x < 0 || x >= n || a < 0 || a >= d || y < 0 || y >= n || b < 0 || b >= d)
            throw std::invalid_argument("statistics: index out of range");
        const std::size_t idx = ((static_cast<std::size_t>(x) * d + a) * n + y) * d + b;
        if (probs[idx] >= 0.0) throw std::invalid_argument("statistics: duplicate entry");
        probs[idx] = e.at("p").get<double>();
    }
    for (double p : probs)
        if (p < 0.0) throw std::invalid_argument("statistics: missing entries");
    return StatTable(n, d, std::move(probs), std::move(zrows));
}

Json realization_to_json(const ExperimentalRealization& r) {
    Json j;
    j["n"] = r.settings();
    j["d"] = r.dim();
    Json states = Json::array();
    for (int x = 0; x < r.settings(); ++x)
        for (int a = 0; a < r.dim(); ++a) {
            Json e;
            e["x"] = x + 1;
            e["a"] = a + 1;
            e["matrix"] = complex_matrix_to_json(r.state(x, a).matrix());
            states.push_back(e);
        }
    j["states"] = states;
    Json meas = Json::array();
    for (int y = 0; y < r.settings(); ++y) {
        Json e;
        e["y"] = y + 1;
        Json effects = Json::array();
        for (int b = 0; b < r.dim(); ++b)
            effects.push_back(complex_matrix_to_json(r.measurement(y).effect(b)));
        e["effects"] = effects;
        meas.push_back(e);
    }
    j["measurements"] = meas;
    return j;
}

ExperimentalRealization realization_from_json(const Json& j) {
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    std::vector<std::optional<QuantumState>> slots(static_cast<std::size_t>(n) * d);
    for (const Json& e : j.at("states")) {
        const int x = e.at("x").get<int>() - 1;
        const int a = e.at("a").get<int>() - 1;
        slots.at(x * d + a) = QuantumState(complex_matrix_from_json(e.at("matrix")));
    }
    std::vector<QuantumState> states;
    for (auto& s : slots) {
        if (!s) throw std::invalid_argument("realization: missing state");
        states.push_back(std::move(*s));
    }
    std::vector<std::optional<Povm>> mslots(n);
    for (const Json& e : j.at("measurements")) {
        const int y = e.at("y").get<int>() - 1;
        std::vector<ComplexMatrix> effects;
        for (const Json& m : e.at("effects")) effects.push_back(complex_matrix_from_json(m));
        mslots.at(y) = Povm(std::move(effects));
    }
    std::vector<Povm> meas;
    for (auto& m : mslots) {
        if (!m) throw std::invalid_argument("realization: missing measurement");
        meas.push_back(std::move(*m));
    }
    return ExperimentalRealization(n, d, std::move(states), std::move(meas));
}

Json certificate_to_json(const OverlapCertificate& c) {
    Json j;
    j["epsilon"] = c.epsilon;
    j["d"] = c.d;
    j["purity_lower"] = c.purity_lower;
    j["projectivity_lower"] = c.projectivity_lower;
    j["state_tol_general"] = c.state_tol_general;
    j["meas_tol_general"] = c.meas_tol_general;
    j["state_overlap_tolerance"] = c.state_overlap_tolerance;
    j["measurement_overlap_tolerance"] = c.measurement_overlap_tolerance;
    if (c.qubit) {
        j["qubit"] = {{"norm_lower", c.qubit->norm_lower},
                      {"state_tol", c.qubit->state_tol},
                      {"meas_tol", c.qubit->meas_tol},
                      {"effect_gap", c.qubit->effect_gap},
                      {"fallback", c.qubit->fallback}};
    }
    Json pairs = Json::array();
    for (const auto& p : c.pairs) {
        pairs.push_back({{"x", p.x + 1},
                         {"a", p.a + 1},
                         {"x2", p.x2 + 1},
                         {"a2", p.a2 + 1},
                         {"target", p.target},
                         {"state_lo", p.state_lo},
                         {"state_hi", p.state_hi},
                         {"meas_lo", p.meas_lo},
                         {"meas_hi", p.meas_hi},
                         {"same_setting", p.same_setting},
                         {"beyond_stated_scope", p.beyond_stated_scope}});
    }
    j["pairs"] = pairs;
    return j;
}

Json selftest_to_json(const SelfTestBounds& b) {
    Json j;
    j["epsilon"] = b.epsilon;
    j["epsilon0"] = b.epsilon0;
    j["validity_limit"] = b.validity_limit;
    j["valid"] = b.valid;
    Json subset = Json::array();
    for (int x : b.subset) subset.push_back(x + 1);
    j["subset"] = subset;
    j["k"] = b.k;
    if (!b.valid) return j;
    j["e_value"] = b.e_value;
    j["td_in_subset_a1_avg"] = b.td->in_subset_a1_avg;
    j["td_in_subset_a2_avg"] = b.td->in_subset_a2_avg;
    Json td_off = Json::array();
    for (const auto& [key, v] : b.td->off_subset)
        td_off.push_back({{"x", key.first + 1}, {"a", key.second + 1}, {"bound", v}});
    j["td_off_subset"] = td_off;
    j["meas_in_subset_avg"] = b.meas->in_subset_avg;
    Json meas_off = Json::array();
    for (const auto& [y, v] : b.meas->off_subset)
        meas_off.push_back({{"y", y + 1}, {"bound", v}});
    j["meas_off_subset"] = meas_off;
    j["fid_in_subset_a1"] = b.fid_in_subset_a1;
    j["fid_in_subset_a2"] = b.fid_in_subset_a2;
    Json fid_off = Json::array();
    for (const auto& [key, v] : b.fid_off_subset)
        fid_off.push_back({{"x", key.first + 1}, {"a", key.second + 1}, {"bound", v}});
    j["fid_off_subset"] = fid_off;
    j["fid_meas_in_subset"] = b.fid_meas_in_subset;
    Json fid_meas_off = Json::array();
    for (const auto& [y, v] : b.fid_meas_off_subset)
        fid_meas_off.push_back({{"y", y + 1}, {"bound", v}});
    j["fid_meas_off_subset"] = fid_meas_off;
    j["avg_state_fidelity_lower"] = b.avg_state_fidelity_lower;
    j["avg_meas_fidelity_lower"] = b.avg_meas_fidelity_lower;
    j["vacuous_state"] = b.vacuous_state;
    j["vacuous_meas"] = b.vacuous_meas;
    return j;
}

Json alignment_to_json(const Alignment& a) {
    Json j;
    Json rot = Json::array();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) rot.push_back(a.rotation(i, k));
    j["rotation_row_major"] = rot;
    Json u = Json::array();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            u.push_back(Json::array({a.unitary(i, k).real(), a.unitary(i, k).imag()}));
    j["unitary"] = u;
    j["transposed"] = a.transposed;
    j["residual"] = a.residual;
    j["achieved_avg_fidelity"] = a.achieved_avg_fidelity;
    return j;
}

Json povm_certificate_to_json(const PovmCertificate& c) {
    return Json{{"is_rank1_consistent", c.is_rank1_consistent},
                {"is_extremal", c.is_extremal},
                {"is_ic", c.is_ic},
                {"is_sic", c.is_sic},
                {"min_singular_value", c.min_singular_value}};
}

int CertReport::exit_code() const {
    if (selftest && !selftest->valid) return 2;
    return 0;
}

Json report_to_json(const CertReport& r) {
    Json j;
    j["scenario"] = r.scenario_name;
    j["epsilon"] = r.epsilon;
    j["overlap_certificate"] = certificate_to_json(r.certificate);
    j["selftest"] = r.selftest ? selftest_to_json(*r.selftest) : Json(nullptr);
    j["alignment"] = r.alignment ? alignment_to_json(*r.alignment) : Json(nullptr);
    j["sr_check"] = r.sr_residual ? Json{{"residual", *r.sr_residual}} : Json(nullptr);
    j["povm_certificate"] = r.povm ? povm_certificate_to_json(*r.povm) : Json(nullptr);
    j["warnings"] = r.warnings;
    j["certified"] = r.exit_code() == 0;
    return j;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows,
                         const std::vector<double>& procrustes_lower) {
    if (!procrustes_lower.empty() && procrustes_lower.size() != rows.size())
        throw std::invalid_argument("sweep_to_csv: column length mismatch");
    std::ostringstream out;
    out << "epsilon,avg_fid_state_a1,avg_fid_state_a2,avg_fid_meas,procrustes_lower,valid\n";
    out.precision(17);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << r.epsilon << ',' << r.fid_a1 << ',' << r.fid_a2 << ',' << r.fid_meas << ',';
        if (!procrustes_lower.empty())
            out << procrustes_lower[i];
        else
            out << "";
        out << ',' << (r.valid ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << content;
}

}  // namespace pmcert
