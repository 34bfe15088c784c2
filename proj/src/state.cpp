#include "p2dsim/state.hpp"

#include <cmath>
#include <stdexcept>

namespace p2d {

const char* to_string(HaltTag tag) {
    switch (tag) {
        case HaltTag::csB_min_zero: return "csB_min_zero";
        case HaltTag::csB_max_saturation: return "csB_max_saturation";
        case HaltTag::ce_min_zero: return "ce_min_zero";
        case HaltTag::ce_unbounded: return "ce_unbounded";
        case HaltTag::T_min_zero: return "T_min_zero";
        case HaltTag::T_unbounded: return "T_unbounded";
        case HaltTag::potential_divergence: return "potential_divergence";
        case HaltTag::solver_failure: return "solver_failure";
    }
    return "unknown";
}

std::span<const double> CellState::solid(const Mesh& mesh, int e) const {
    const int off = mesh.solid_offset(e);
    return {cs.data() + off, static_cast<std::size_t>(mesh.particle_of_electrode(e).shells())};
}

std::span<double> CellState::solid(const Mesh& mesh, int e) {
    const int off = mesh.solid_offset(e);
    return {cs.data() + off, static_cast<std::size_t>(mesh.particle_of_electrode(e).shells())};
}

std::vector<double> boundary_trace_field(const Mesh& mesh, std::span<const double> cs_flat) {
    std::vector<double> csB(mesh.electrode_count());
    for (int e = 0; e < mesh.electrode_count(); ++e) {
        const ParticleGrid& grid = mesh.particle_of_electrode(e);
        const int m = grid.shells();
        const double* c = cs_flat.data() + mesh.solid_offset(e);
        // linear extrapolation from the two outermost shell centers to r = Rs;
        // exact for fields linear in r, O(dr^2) for smooth profiles
        const double r1 = grid.centers[m - 2], r2 = grid.centers[m - 1];
        const double slope = (c[m - 1] - c[m - 2]) / (r2 - r1);
        csB[e] = c[m - 1] + (grid.radius - r2) * slope;
    }
    return csB;
}

std::vector<double> boundary_trace(const Mesh& mesh, const CellState& state) {
    return boundary_trace_field(mesh, state.cs);
}

std::optional<HaltReason> check_admissible(const Mesh& mesh, const CellConfig& cfg,
                                           const CellState& state) {
    for (int i = 0; i < mesh.cells(); ++i) {
        if (!(state.ce[i] > 0) || !std::isfinite(state.ce[i]))
            return HaltReason{HaltTag::ce_min_zero, state.t, i, state.ce[i],
                              "electrolyte concentration left (0, inf)"};
    }
    const std::vector<double> csB = boundary_trace(mesh, state);
    for (int e = 0; e < mesh.electrode_count(); ++e) {
        const int cell = mesh.cell_of_electrode(e);
        if (!(csB[e] > 0) || !std::isfinite(csB[e]))
            return HaltReason{HaltTag::csB_min_zero, state.t, cell, csB[e],
                              "surface concentration reached 0"};
        if (!(csB[e] < cfg.kinetics.cs_max))
            return HaltReason{HaltTag::csB_max_saturation, state.t, cell, csB[e],
                              "surface concentration reached cs_max"};
    }
    if (!(state.T > 0) || !std::isfinite(state.T))
        return HaltReason{HaltTag::T_min_zero, state.t, -1, state.T, "temperature reached 0"};
    return std::nullopt;
}

CellState initial_state(const Mesh& mesh, const CellConfig& cfg) {
    CellState st;
    st.t = 0;
    st.T = cfg.initial.T0;
    st.ce.resize(mesh.cells());
    for (int i = 0; i < mesh.cells(); ++i) st.ce[i] = cfg.initial.ce0(mesh.centers[i]);
    st.cs.resize(mesh.solid_size());
    for (int e = 0; e < mesh.electrode_count(); ++e) {
        const double v = e < mesh.n_anode ? cfg.initial.cs0_neg : cfg.initial.cs0_pos;
        for (double& c : st.solid(mesh, e)) c = v;
    }
    st.phie.assign(mesh.cells(), 0.0);
    st.phie_li.assign(mesh.cells(), 0.0);
    st.phis.assign(mesh.electrode_count(), 0.0);

    if (auto bad = check_admissible(mesh, cfg, st)) {
        throw std::invalid_argument(std::string("initial_state: inadmissible initial data (") +
                                    to_string(bad->tag) + " at cell " +
                                    std::to_string(bad->cell) + ", value " +
                                    std::to_string(bad->value) + ")");
    }
    return st;
}

}  // namespace p2d
