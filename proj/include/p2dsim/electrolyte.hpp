#pragma once

#include <span>
#include <vector>

#include "p2dsim/config.hpp"
#include "p2dsim/mesh.hpp"

namespace p2d {

/// One implicit-Euler step of macroscale electrolyte diffusion:
///   dce/dt - (De(x) ce_x)_x = alpha_e * j,  zero flux at x = 0 and x = L.
/// De is evaluated at cell centers and harmonically averaged onto faces. The
/// source j is the flux field of the same Picard iterate. Conservative flux-form
/// reconstruction makes  Delta(integral ce) = alpha_e * (integral j) * dt  hold to
/// summation roundoff.
std::vector<double> step_electrolyte(const Mesh& mesh, const CellConfig& cfg,
                                     std::span<const double> ce,
                                     std::span<const double> j_cells, double dt);

}  // namespace p2d
