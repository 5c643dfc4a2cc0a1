#include "pmcert/catalog.hpp"

#include <cmath>

namespace pmcert {

namespace {

PmScenario from_directions(const std::vector<Bloch>& dirs) {
    std::vector<QuantumState> states;
    states.reserve(dirs.size() * 2);
    for (const Bloch& n : dirs) {
        states.push_back(QuantumState::from_bloch(n));
        states.push_back(QuantumState::from_bloch(-n));
    }
    return PmScenario(static_cast<int>(dirs.size()), 2, std::move(states));
}

}  // namespace

std::vector<std::string> catalog_names() {
    return {"mub2", "mub3", "biased", "trine", "tetrahedron", "sic-qubit"};
}

Bloch trine_direction(int i) {
    switch (i) {
        case 0: return Bloch(1.0, 0.0, 0.0);
        case 1: return Bloch(-0.5, std::sqrt(3.0) / 2.0, 0.0);
        case 2: return Bloch(-0.5, -std::sqrt(3.0) / 2.0, 0.0);
    }
    throw std::invalid_argument("trine_direction: index");
}

Bloch tetrahedron_direction(int i) {
    switch (i) {
        case 0: return Bloch(0.0, 0.0, 1.0);
        case 1: return Bloch(std::sqrt(8.0 / 9.0), 0.0, -1.0 / 3.0);
        case 2: return Bloch(-std::sqrt(2.0 / 9.0), std::sqrt(2.0 / 3.0), -1.0 / 3.0);
        case 3: return Bloch(-std::sqrt(2.0 / 9.0), -std::sqrt(2.0 / 3.0), -1.0 / 3.0);
    }
    throw std::invalid_argument("tetrahedron_direction: index");
}

PmScenario catalog_scenario(const std::string& name, double alpha) {
    if (name == "mub2")
        return from_directions({Bloch(0, 0, 1), Bloch(1, 0, 0)});
    if (name == "mub3")
        return from_directions({Bloch(0, 0, 1), Bloch(1, 0, 0), Bloch(0, 1, 0)});
    if (name == "biased") {
        if (alpha < 0.0 || alpha > 1.0)
            throw std::invalid_argument("biased: alpha must lie in [0,1]");
        // Gram of the two primary vectors is (1, alpha; alpha, 1).
        return from_directions(
            {Bloch(0, 0, 1), Bloch(std::sqrt(1.0 - alpha * alpha), 0, alpha)});
    }
    if (name == "trine")
        return from_directions({trine_direction(0), trine_direction(1), trine_direction(2)});
    if (name == "tetrahedron" || name == "sic-qubit")
        return from_directions({tetrahedron_direction(0), tetrahedron_direction(1),
                                tetrahedron_direction(2), tetrahedron_direction(3)});
    throw std::invalid_argument("unknown catalog scenario: " + name);
}

Povm sic_qubit_povm() {
    std::vector<ComplexMatrix> effects;
    for (int i = 0; i < 4; ++i)
        effects.push_back(0.5 * QuantumState::from_bloch(tetrahedron_direction(i)).matrix());
    return Povm(std::move(effects));
}

}  // namespace pmcert
