#include "p2dsim/thermal.hpp"

#include <algorithm>
#include <cmath>

#include "p2dsim/kinetics.hpp"

namespace p2d {

HeatBreakdown heat_sources(const Mesh& mesh, const CellConfig& cfg, const StateSlice& slice,
                           const PotentialSolution& sol, double I) {
    HeatBreakdown q;
    const double A = cfg.geometry.A;
    const int n = mesh.cells();

    // reaction and entropic heat: cell-centered quadrature over the electrodes
    for (int i = 0; i < n; ++i) {
        const int e = mesh.electrode_of_cell(i);
        if (e < 0) continue;
        const Region r = mesh.region[i];
        const double U = ocp(r, slice.ce[i], slice.csB[e], slice.T, cfg.kinetics);
        const double eta = sol.phis[e] - sol.phie[i] - U;
        const double dUdT = docp_dT(r, slice.ce[i], slice.csB[e], slice.T, cfg.kinetics);
        q.q_r += A * mesh.widths[i] * sol.j[i] * eta;
        q.q_e += slice.T * A * mesh.widths[i] * sol.j[i] * dUdT;
    }

    // Joule heat: face-centered Dirichlet-energy quadrature matching the
    // assembled conductances (interior faces; the span weight is the
    // center-to-center distance)
    for (int f = 1; f < n; ++f) {
        const double h = mesh.centers[f] - mesh.centers[f - 1];
        const double ge = (sol.phie[f] - sol.phie[f - 1]) / h;
        const double kappa_face =
            2.0 * cfg.transport.kappa(slice.ce[f - 1], slice.T) *
            cfg.transport.kappa(slice.ce[f], slice.T) /
            (cfg.transport.kappa(slice.ce[f - 1], slice.T) +
             cfg.transport.kappa(slice.ce[f], slice.T));
        const double gf = (cfg.transport.f_phie(slice.ce[f]) -
                           cfg.transport.f_phie(slice.ce[f - 1])) /
                          h;
        q.q_j += A * h * (kappa_face * ge * ge +
                          cfg.transport.alpha_phie * slice.T * kappa_face * gf * ge);
        if (mesh.is_electrode(f - 1) && mesh.is_electrode(f) &&
            mesh.region[f - 1] == mesh.region[f]) {
            const int e0 = mesh.electrode_of_cell(f - 1), e1 = mesh.electrode_of_cell(f);
            const double gs = (sol.phis[e1] - sol.phis[e0]) / h;
            q.q_j += A * h * cfg.transport.sigma(mesh.region[f]) * gs * gs;
        }
    }

    q.q_c = (cfg.geometry.Rf / A) * I * I;
    return q;
}

ThermalRhs thermal_rhs(const ThermalParams& tp, const HeatBreakdown& heat) {
    switch (tp.mode) {
        case ThermalParams::Mode::Full:
            return {heat.total(), 0.0};
        case ThermalParams::Mode::LinearTruncated: {
            const double B = std::clamp(tp.B_T, 0.0, tp.B_T_max);
            const double A = std::clamp(tp.A_T, tp.A_T_min, tp.A_T_max);
            return {B, A};
        }
        case ThermalParams::Mode::Zero: return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

double step_temperature(double T, const ThermalRhs& rhs, const ThermalParams& tp, double dt) {
    // dT/dt = -lambda T + s  with  lambda = alpha_T - A_lin,  s = alpha_T T_amb + B.
    // Exact integrating-factor update with the source frozen over the step.
    const double lambda = tp.alpha_T - rhs.A_lin;
    const double s = tp.alpha_T * tp.T_amb + rhs.B;
    if (lambda == 0.0) return T + dt * s;
    const double Tstar = s / lambda;
    return Tstar + (T - Tstar) * std::exp(-lambda * dt);
}

}  // namespace p2d
