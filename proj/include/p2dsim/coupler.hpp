#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "p2dsim/config.hpp"
#include "p2dsim/diagnostics.hpp"
#include "p2dsim/kinetics.hpp"
#include "p2dsim/mesh.hpp"
#include "p2dsim/potential.hpp"
#include "p2dsim/state.hpp"

namespace p2d {

/// Outcome of one attempted time step (including its retry cascade).
struct StepReport {
    double dt = 0;              // accepted step size
    int picard_iters = 0;
    double picard_residual = 0;          // final scaled update norm
    std::vector<double> picard_history;  // scaled update norm per sweep
    int newton_iters_max = 0;
    int retries = 0;  // dt halvings consumed before acceptance
    double compat_anode_gap = 0, compat_cathode_gap = 0, j_total = 0;
    std::optional<HaltReason> halted;
};

struct StepResult {
    CellState state;             // accepted new state (valid only if !report.halted)
    PotentialSolution potentials;
    HeatBreakdown heat;
    StepReport report;
};

FluxMode flux_mode_of(const CellConfig& cfg);

/// Gauss-Seidel fixed-point sweep for the implicit step t -> t + dt:
/// potentials at the current iterate slice, then transport (electrolyte +
/// particles) and temperature restarted from the base state with the frozen
/// coupling fields, until the scaled state update falls below picard_tol.
/// Non-convergence halves dt and retries down to dt_min; below that the report
/// carries a solver_failure halt. Monitor violations on the accepted state are
/// reported as the matching halt tags.
StepResult picard_step(const Mesh& mesh, const CellConfig& cfg, const CellState& base,
                       double I_end, double dt_target, const SolverOptions& opts);

/// Monitor sweep on a solved state: strict admissibility surrogates (ce floor and
/// cap, csB margins, T window) plus the potential-gap cap. ce_ref is the initial
/// mean electrolyte concentration.
std::optional<HaltReason> check_monitors(const Mesh& mesh, const CellConfig& cfg,
                                         const CellState& state,
                                         const PotentialSolution& sol, double ce_ref);

using RecordHook = std::function<void(const TimeSeriesRecord&, const CellState&,
                                      const PotentialSolution&)>;

struct RunResult {
    std::vector<TimeSeriesRecord> series;
    CellState final_state;
    std::optional<HaltReason> halt;
    int steps_accepted = 0;
    int max_picard_iters = 0;
    int max_newton_iters = 0;
    double max_compat_gap = 0;
    double max_j_total = 0;
    // running ledger inputs
    double expected_electrolyte_change = 0;  // alpha_e * sum dt * (integral j)
    ConservationLedger ledger;
};

/// Full time loop over the current profile: exact landing on every breakpoint,
/// elliptic re-solve at each piece start, dt growth by opts.growth after
/// opts.grow_after consecutive easy steps. Emits a record every
/// opts.record_every accepted steps plus piece boundaries, halts, and t_end.
RunResult run(const Mesh& mesh, const CellConfig& cfg, const CurrentProfile& profile,
              const SolverOptions& opts, const RecordHook& hook = {});

}  // namespace p2d
