#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "p2dsim/config.hpp"
#include "p2dsim/kinetics.hpp"
#include "p2dsim/mesh.hpp"

namespace p2d {

/// Frozen transport/kinetics inputs of one elliptic solve: a concentration and
/// temperature slice at a fixed time level.
struct StateSlice {
    std::span<const double> ce;   // per macro cell
    std::span<const double> csB;  // per electrode node
    double T = 0;
};

struct EllipticOptions {
    double newton_tol = 1e-10;  // on the scaled residual norm
    int max_iters = 50;
    double backtrack_factor = 0.5;
    double min_step = 9.5367431640625e-7;  // 2^-20
};

struct PotentialSolution {
    std::vector<double> phie_li;  // per macro cell, weighted mean exactly projected to 0
    std::vector<double> phis;     // per electrode cell
    std::vector<double> phie;     // reconstructed phi_e = phie_li + alpha_phie*T*f(ce)
    std::vector<double> j;        // converged flux density per macro cell (0 in separator)
    int newton_iters = 0;
    double residual_norm = 0;       // final scaled residual
    double compat_anode_gap = 0;    // integral_anode j - I/A
    double compat_cathode_gap = 0;  // integral_cathode j + I/A
    double j_total = 0;             // integral_0^L j
};

struct PotentialSolveResult {
    bool converged = false;
    PotentialSolution solution;
    std::string message;  // failure context (last residual, iteration count)
};

/// Residual of the coupled potential system in the unknowns
/// z = (phie_li per cell, phis per electrode cell):
///   electrolyte rows: -(kappa_tilde phie_li')' - j = 0 with zero end fluxes,
///   solid rows:       -(sigma phis')' + j = 0 with sigma phis' = -I/A at x in {0, L}
///                     and zero flux at the electrode/separator interfaces.
/// Face conductances use harmonic means of cell values. Rows sum to zero
/// identically, so when with_gauge_row is set the last electrolyte row is
/// replaced by the gauge constraint sum_i w_i phie_li_i = 0.
std::vector<double> assemble_residual(const Mesh& mesh, const CellConfig& cfg,
                                      const StateSlice& slice, double I,
                                      std::span<const double> phie_li,
                                      std::span<const double> phis, const FluxMode& mode,
                                      bool with_gauge_row = true);

/// Analytic Jacobian of assemble_residual (same gauge-row convention).
/// Tridiagonal diffusion blocks plus a symmetric 2x2 flux coupling per electrode
/// cell; symmetric positive semidefinite before the gauge row is applied.
Eigen::SparseMatrix<double> assemble_jacobian(const Mesh& mesh, const CellConfig& cfg,
                                              const StateSlice& slice,
                                              std::span<const double> phie_li,
                                              std::span<const double> phis,
                                              const FluxMode& mode,
                                              bool with_gauge_row = true);

/// Damped Newton solve with Armijo backtracking and warm start. The constant
/// null mode is projected out of every iterate (exactly, by subtracting the
/// weighted mean of phie_li from both fields), so the gauge holds at roundoff.
/// Non-convergence is reported, not thrown; the caller owns dt control.
PotentialSolveResult solve_potentials(const Mesh& mesh, const CellConfig& cfg,
                                      const StateSlice& slice, double I,
                                      const FluxMode& mode, const EllipticOptions& opts,
                                      const PotentialSolution* warm_start = nullptr);

/// Flux density field at given potentials (0 in the separator).
std::vector<double> flux_field(const Mesh& mesh, const CellConfig& cfg,
                               const StateSlice& slice, std::span<const double> phie_li,
                               std::span<const double> phis, const FluxMode& mode);

}  // namespace p2d
