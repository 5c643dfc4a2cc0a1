#pragma once

#include <string>
#include <vector>

#include "pmcert/scenario.hpp"

namespace pmcert {

// Built-in qubit configurations:
//   mub2         two mutually unbiased bases (sigma_z, sigma_x)
//   mub3         three mutually unbiased bases (sigma_z, sigma_x, sigma_y)
//   biased       two bases with tr(rho^1_a rho^2_a) = (1+alpha)/2
//   trine        three coplanar directions at 120 degrees
//   tetrahedron  four directions forming a regular tetrahedron
//   sic-qubit    tetrahedron bases, paired with the qubit SIC measurement
std::vector<std::string> catalog_names();

PmScenario catalog_scenario(const std::string& name, double alpha = 0.5);

/// Effects (1/2)|t_b><t_b| along the tetrahedron directions.
Povm sic_qubit_povm();

Bloch trine_direction(int i);        // i in {0,1,2}
Bloch tetrahedron_direction(int i);  // i in {0,1,2,3}

}  // namespace pmcert
