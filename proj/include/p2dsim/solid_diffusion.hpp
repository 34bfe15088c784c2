#pragma once

#include <span>
#include <vector>

#include "p2dsim/config.hpp"
#include "p2dsim/mesh.hpp"

namespace p2d {

/// One implicit-Euler step of spherical diffusion for a single particle:
///   dc/dt = (1/r^2) d/dr (r^2 Ds dc/dr),  c_r(0) = 0,  -Ds c_r(Rs) = g.
/// The returned field is rebuilt in conservative flux form from the implicit
/// solve, so the shell-mass identity  sum_i vol_i (c'_i - c_i) = -Rs^2 g dt
/// holds to summation roundoff for any dt.
std::vector<double> step_particle(const ParticleGrid& grid, std::span<const double> c,
                                  double Ds, double g, double dt);

/// Advances every electrode node's particle with surface flux g = alpha_s(x) * j(x).
/// Nodes are independent; `threads` > 1 splits the node range into contiguous
/// chunks with disjoint output slices, so results are identical for any count.
void step_all_particles(const Mesh& mesh, const CellConfig& cfg,
                        std::span<const double> cs_in, std::span<const double> j_cells,
                        double dt, int threads, std::span<double> cs_out);

/// Volume-weighted totals per electrode: sum over nodes of w_x * sum_r vol_r * c.
double solid_total(const Mesh& mesh, std::span<const double> cs_flat, Region r);

}  // namespace p2d
