#pragma once

#include "p2dsim/config.hpp"
#include "p2dsim/mesh.hpp"
#include "p2dsim/potential.hpp"

namespace p2d {

/// Lumped heat production split:
///   q_r reaction heat   A * integral_electrodes j * eta
///   q_j Joule heat      A * integral_electrodes sigma (phis')^2
///                       + A * integral_0^L [kappa (phie')^2 + alpha_phie T kappa f(ce)' phie']
///   q_c contact heat    (Rf/A) I^2
///   q_e entropic heat   T * A * integral_electrodes j * dU/dT
struct HeatBreakdown {
    double q_r = 0, q_j = 0, q_c = 0, q_e = 0;
    double total() const { return q_r + q_j + q_c + q_e; }
};

/// Mesh quadrature of the heat sources at one converged potential solution.
/// Gradients are face differences weighted by center-to-center spans.
HeatBreakdown heat_sources(const Mesh& mesh, const CellConfig& cfg, const StateSlice& slice,
                           const PotentialSolution& sol, double I);

/// Effective affine right-hand side  dT/dt = -alpha_T (T - T_amb) + B + A_lin * T
/// for the configured thermal mode. Full mode freezes the computed breakdown into
/// B (A_lin = 0); linear-truncated mode clamps the declared coefficients to their
/// boxes; zero mode switches the source off.
struct ThermalRhs {
    double B = 0;
    double A_lin = 0;
};
ThermalRhs thermal_rhs(const ThermalParams& tp, const HeatBreakdown& heat);

/// Advances the lumped temperature with the exact integrating-factor update of
/// the affine ODE (source frozen over the step): unconditionally stable, exact
/// for F_T = 0, first-order in the frozen source. Never returns NaN; a
/// non-positive or non-finite result is the caller's T_min/T_max monitor signal.
double step_temperature(double T, const ThermalRhs& rhs, const ThermalParams& tp, double dt);

}  // namespace p2d
