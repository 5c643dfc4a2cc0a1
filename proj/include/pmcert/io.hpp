#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmcert/alignment.hpp"
#include "pmcert/extensions.hpp"
#include "pmcert/overlap_cert.hpp"
#include "pmcert/selftest.hpp"

namespace pmcert {

using Json = nlohmann::json;

// Scenario files: {"n":., "d":., "states":[{"x":1,"a":1,"bloch":[x,y,z]} |
// {"x":..,"a":..,"vector":[[re,im],...]}], optional "measurements"}.
// Indices are 1-based on disk, 0-based in memory. Optional measurements are
// checked against the scheme constraint M^x_a = rho^x_a rather than stored.
Json scenario_to_json(const PmScenario& s);
PmScenario scenario_from_json(const Json& j);

// Statistics files: {"n":., "d":., "entries":[{"x","a","y","b","p"}...]},
// optionally extended with {"z":[x,a,x',a'], "y":., "b":., "p":.} rows.
Json stat_table_to_json(const StatTable& t);
StatTable stat_table_from_json(const Json& j);

Json realization_to_json(const ExperimentalRealization& r);
ExperimentalRealization realization_from_json(const Json& j);

Json certificate_to_json(const OverlapCertificate& c);
Json selftest_to_json(const SelfTestBounds& b);
Json alignment_to_json(const Alignment& a);
Json povm_certificate_to_json(const PovmCertificate& c);

struct CertReport {
    std::string scenario_name;
    double epsilon = 0.0;
    OverlapCertificate certificate;
    std::optional<SelfTestBounds> selftest;
    std::optional<Alignment> alignment;
    std::optional<double> sr_residual;
    std::optional<PovmCertificate> povm;
    std::vector<std::string> warnings;

    /// 0 certified, 2 vacuous self-test bounds.
    int exit_code() const;
};

Json report_to_json(const CertReport& r);

/// CSV with columns epsilon, avg_fid_state_a1, avg_fid_state_a2,
/// avg_fid_meas, procrustes_lower, valid.
std::string sweep_to_csv(const std::vector<SweepRow>& rows,
                         const std::vector<double>& procrustes_lower);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace pmcert
