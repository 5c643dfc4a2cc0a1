#pragma once

#include <cstdint>
#include <random>

#include "pmcert/quantum.hpp"

namespace pmcert {

/// Deterministic sampling helpers. Distributions are implemented by hand so
/// that seeded outputs are identical across standard libraries, which keeps
/// golden files byte-stable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    Bloch unit3() {
        Bloch v;
        do {
            v = Bloch(gauss(), gauss(), gauss());
        } while (v.norm() < 1e-12);
        return v / v.norm();
    }

    Eigen::Vector4d unit_quaternion() {
        Eigen::Vector4d q;
        do {
            q = Eigen::Vector4d(gauss(), gauss(), gauss(), gauss());
        } while (q.norm() < 1e-12);
        return q / q.norm();
    }

    /// Haar-random qubit unitary (global phase irrelevant for conjugation).
    ComplexMatrix haar_qubit_unitary() { return su2_from_quaternion(unit_quaternion()); }

    RealMatrix random_rotation() { return rotation_from_quaternion(unit_quaternion()); }

    /// Rotation by an angle <= max_angle about a uniform axis.
    RealMatrix small_rotation(double max_angle) {
        const Bloch axis = unit3();
        const double angle = uniform(0.0, max_angle);
        Eigen::Vector4d q;
        q << std::cos(angle / 2.0), std::sin(angle / 2.0) * axis;
        return rotation_from_quaternion(q);
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pmcert
