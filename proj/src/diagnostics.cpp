#include "p2dsim/diagnostics.hpp"

#include <cmath>

#include "p2dsim/solid_diffusion.hpp"

namespace p2d {

double voltage(const Mesh& mesh, const CellConfig& cfg, const PotentialSolution& sol, double I) {
    const double IA = I / cfg.geometry.A;
    // boundary traces with the exact Neumann gradient sigma phis' = -I/A
    const double slope0 = -IA / cfg.transport.sigma_anode;
    const double slopeL = -IA / cfg.transport.sigma_cathode;
    const double phis0 = sol.phis.front() + (0.0 - mesh.centers.front()) * slope0;
    const double phisL = sol.phis.back() + (mesh.length() - mesh.centers.back()) * slopeL;
    return phisL - phis0 - cfg.geometry.Rf * IA;
}

double soc(const Mesh& mesh, const CellConfig& cfg, std::span<const double> cs_flat) {
    // volume average of cs/cs_max over the negative electrode
    double num = 0, den = 0;
    for (int e = 0; e < mesh.n_anode; ++e) {
        const int cell = mesh.cell_of_electrode(e);
        const ParticleGrid& grid = mesh.particle_of_electrode(e);
        num += mesh.widths[cell] * grid.mass(cs_flat.subspan(mesh.solid_offset(e), grid.shells()));
        den += mesh.widths[cell] * grid.total_volume();
    }
    return num / (den * cfg.kinetics.cs_max);
}

ConservationLedger conservation_ledger(const Mesh& mesh, const CellConfig& cfg,
                                       const CellState& first, const CellState& last,
                                       double expected_electrolyte_change) {
    ConservationLedger led;
    led.electrolyte_initial = mesh.integrate(first.ce);
    led.electrolyte_final = mesh.integrate(last.ce);
    led.expected_electrolyte_change = expected_electrolyte_change;
    led.electrolyte_drift_rel =
        std::abs(led.electrolyte_final - led.electrolyte_initial - expected_electrolyte_change) /
        led.electrolyte_initial;

    led.anode_initial = solid_total(mesh, first.cs, Region::Anode);
    led.anode_final = solid_total(mesh, last.cs, Region::Anode);
    led.cathode_initial = solid_total(mesh, first.cs, Region::Cathode);
    led.cathode_final = solid_total(mesh, last.cs, Region::Cathode);
    led.net_solid_change =
        (led.anode_final + led.cathode_final) - (led.anode_initial + led.cathode_initial);

    const double m_neg =
        cfg.geometry.Rs_neg * cfg.geometry.Rs_neg * cfg.transport.alpha_s_neg;
    const double m_pos =
        cfg.geometry.Rs_pos * cfg.geometry.Rs_pos * cfg.transport.alpha_s_pos;
    led.exchange_matched = std::abs(m_neg - m_pos) <= 1e-12 * std::max(m_neg, m_pos);
    // anode/m_neg + cathode/m_pos is conserved for any profile: each electrode's
    // rate is -(Rs^2 alpha_s) * (its compatibility integral), and those integrals
    // are +-I/A
    const double w0 = led.anode_initial / m_neg + led.cathode_initial / m_pos;
    const double w1 = led.anode_final / m_neg + led.cathode_final / m_pos;
    led.exchange_weighted_drift_rel = std::abs(w1 - w0) / std::abs(w0);
    return led;
}

}  // namespace p2d
