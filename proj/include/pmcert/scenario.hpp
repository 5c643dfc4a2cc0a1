#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmcert/quantum.hpp"

namespace pmcert {

/// Target configuration: n settings, dimension d, pure states rho^x_a with
/// sum_a rho^x_a = 1 per setting. Measurements are defined by the scheme as
/// M^x_a = rho^x_a and are not stored separately.
class PmScenario {
  public:
    /// states[x*d + a] is the (x,a) preparation, indices 0-based internally.
    PmScenario(int n, int d, std::vector<QuantumState> states);

    int settings() const { return n_; }
    int dim() const { return d_; }
    const QuantumState& state(int x, int a) const { return states_.at(x * d_ + a); }
    Povm measurement(int y) const;

    /// Bloch vectors of the a=0 states, one per setting (d=2 only).
    std::vector<Bloch> primary_bloch() const;

  private:
    int n_, d_;
    std::vector<QuantumState> states_;
};

/// Probability table p(b|a,x,y), normalized over b per (a,x,y).
class StatTable {
  public:
    struct ZEntry {
        int x, a, x2, a2;  // the pair of preparations the row refers to
        int y, b;
        double p;
    };

    StatTable(int n, int d, std::vector<double> probs,
              std::vector<ZEntry> z_entries = {});

    int settings() const { return n_; }
    int dim() const { return d_; }
    double p(int x, int a, int y, int b) const {
        return probs_[((static_cast<std::size_t>(x) * d_ + a) * n_ + y) * d_ + b];
    }
    const std::vector<double>& raw() const { return probs_; }
    const std::vector<ZEntry>& z_entries() const { return z_; }
    bool has_z_entries() const { return !z_.empty(); }
    void append_z_entry(const ZEntry& e) { z_.push_back(e); }

  private:
    int n_, d_;
    std::vector<double> probs_;
    std::vector<ZEntry> z_;
};

/// Any states/POVMs on dimension d claiming to reproduce the observations.
/// No purity or projectivity requirement.
class ExperimentalRealization {
  public:
    ExperimentalRealization(int n, int d, std::vector<QuantumState> states,
                            std::vector<Povm> measurements);

    static ExperimentalRealization from_scenario(const PmScenario& s);

    int settings() const { return n_; }
    int dim() const { return d_; }
    const QuantumState& state(int x, int a) const { return states_.at(x * d_ + a); }
    const Povm& measurement(int y) const { return meas_.at(y); }

  private:
    int n_, d_;
    std::vector<QuantumState> states_;
    std::vector<Povm> meas_;
};

enum class NoiseKind {
    GlobalUnitary,   // conjugate everything by one Haar-random unitary
    Depolarize,      // rho -> (1-delta) rho + delta 1/d
    BlochRotate,     // independent small rotations (d=2)
    EffectSmear      // M_b -> (1-delta) M_b + (delta/d) 1
};

struct NoiseSpec {
    NoiseKind kind;
    double delta = 0.0;
};

std::optional<NoiseKind> noise_kind_from_string(const std::string& s);
std::string to_string(NoiseKind k);

StatTable born_table(const PmScenario& s);
StatTable born_table(const ExperimentalRealization& r);

/// Max over all (a,b,x,y) of |observed - target Born probability|.
double deviation_epsilon(const StatTable& observed, const PmScenario& scenario);

/// Deterministic noisy realization of the target configuration.
ExperimentalRealization perturb(const PmScenario& s, const NoiseSpec& noise,
                                std::uint64_t seed);

}  // namespace pmcert
