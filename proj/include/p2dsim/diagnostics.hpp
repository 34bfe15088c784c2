#pragma once

#include <span>
#include <vector>

#include "p2dsim/config.hpp"
#include "p2dsim/mesh.hpp"
#include "p2dsim/potential.hpp"
#include "p2dsim/state.hpp"
#include "p2dsim/thermal.hpp"

namespace p2d {

/// Terminal voltage V = phis(L) - phis(0) - (Rf/A) I. The boundary values are
/// cell-center values extrapolated with the exact boundary gradient
/// phis'(0) = phis'(L) = -I/(A sigma).
double voltage(const Mesh& mesh, const CellConfig& cfg, const PotentialSolution& sol, double I);

/// Anode state of charge: volume average of cs/cs_max over the negative
/// electrode, 3/(L1 Rs^3) * integral_x integral_r r^2 cs/cs_max.
double soc(const Mesh& mesh, const CellConfig& cfg, std::span<const double> cs_flat);

/// One emitted time-series row.
struct TimeSeriesRecord {
    double t = 0, I = 0, V = 0, soc = 0, T = 0;
    double ce_min = 0, ce_max = 0, csB_min = 0, csB_max = 0;
    double dt = 0;
    int picard_iters = 0;
    int newton_iters_max = 0;
    double picard_residual = 0;
    double compat_anode_gap = 0, compat_cathode_gap = 0, j_total = 0;
    HeatBreakdown heat;
};

/// Mass bookkeeping over a stored state sequence.
struct ConservationLedger {
    double electrolyte_initial = 0, electrolyte_final = 0;
    double electrolyte_drift_rel = 0;     // vs alpha_e-weighted expected change
    double expected_electrolyte_change = 0;  // alpha_e * integral over time of (integral j) dt
    double anode_initial = 0, anode_final = 0;
    double cathode_initial = 0, cathode_final = 0;
    double exchange_weighted_drift_rel = 0;  // drift of anode/m_neg-normalized exchange sum
    double net_solid_change = 0;             // (anode+cathode) shell-volume-weighted change
    bool exchange_matched = false;           // Rs^2 alpha_s equal across electrodes
};

/// Computes the ledger from states stored at the recording cadence. The expected
/// electrolyte change must be accumulated by the caller (integral of j over time);
/// pass 0 for a zero-source audit.
ConservationLedger conservation_ledger(const Mesh& mesh, const CellConfig& cfg,
                                       const CellState& first, const CellState& last,
                                       double expected_electrolyte_change);

}  // namespace p2d
