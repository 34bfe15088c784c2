#include "p2dsim/coupler.hpp"

#include <algorithm>
#include <cmath>

#include "p2dsim/electrolyte.hpp"
#include "p2dsim/solid_diffusion.hpp"
#include "p2dsim/thermal.hpp"

namespace p2d {

FluxMode flux_mode_of(const CellConfig& cfg) {
    switch (cfg.run_mode) {
        case RunMode::Exponential: return FluxMode::exponential();
        case RunMode::Truncated:
        case RunMode::TruncatedLinearFT: return FluxMode::truncated(cfg.s_inf.value_or(0.0));
    }
    return FluxMode::exponential();
}

namespace {

double initial_ce_mean(const Mesh& mesh, const CellConfig& cfg) {
    double s = 0;
    for (int i = 0; i < mesh.cells(); ++i) s += mesh.widths[i] * cfg.initial.ce0(mesh.centers[i]);
    return s / mesh.length();
}

}  // namespace

std::optional<HaltReason> check_monitors(const Mesh& mesh, const CellConfig& cfg,
                                         const CellState& state, const PotentialSolution& sol,
                                         double ce_ref) {
    const auto& mon = cfg.monitors;
    for (int i = 0; i < mesh.cells(); ++i) {
        if (!(state.ce[i] >= mon.ce_floor_rel * ce_ref) || !std::isfinite(state.ce[i]))
            return HaltReason{HaltTag::ce_min_zero, state.t, i, state.ce[i],
                              "electrolyte concentration under monitor floor"};
        if (!(state.ce[i] <= mon.ce_cap_rel * ce_ref))
            return HaltReason{HaltTag::ce_unbounded, state.t, i, state.ce[i],
                              "electrolyte concentration above monitor cap"};
    }
    const double margin = mon.csB_margin_rel * cfg.kinetics.cs_max;
    const std::vector<double> csB = boundary_trace(mesh, state);
    for (int e = 0; e < mesh.electrode_count(); ++e) {
        const int cell = mesh.cell_of_electrode(e);
        if (!(csB[e] >= margin) || !std::isfinite(csB[e]))
            return HaltReason{HaltTag::csB_min_zero, state.t, cell, csB[e],
                              "surface concentration under monitor margin"};
        if (!(csB[e] <= cfg.kinetics.cs_max - margin))
            return HaltReason{HaltTag::csB_max_saturation, state.t, cell, csB[e],
                              "surface concentration above cs_max margin"};
    }
    if (!(state.T >= mon.T_min) || !std::isfinite(state.T))
        return HaltReason{HaltTag::T_min_zero, state.t, -1, state.T,
                          "temperature under monitor floor"};
    if (!(state.T <= mon.T_max))
        return HaltReason{HaltTag::T_unbounded, state.t, -1, state.T,
                          "temperature above monitor cap"};
    for (int e = 0; e < mesh.electrode_count(); ++e) {
        const int cell = mesh.cell_of_electrode(e);
        const double gap = std::abs(sol.phis[e] - sol.phie_li[cell]);
        if (!(gap <= mon.potential_cap) || !std::isfinite(gap))
            return HaltReason{HaltTag::potential_divergence, state.t, cell, gap,
                              "potential gap above monitor cap"};
    }
    return std::nullopt;
}

namespace {

struct SweepOutcome {
    bool converged = false;
    CellState state;              // candidate accepted state
    PotentialSolution potentials;
    HeatBreakdown heat;
    int iters = 0;
    int newton_max = 0;
    double residual = 0;
    std::vector<double> history;
    std::optional<HaltReason> admissibility;  // strict violation inside the sweep
    std::string failure;                      // non-halt failure context
};

SweepOutcome attempt_step(const Mesh& mesh, const CellConfig& cfg, const CellState& base,
                          double I_end, double dt, const SolverOptions& opts) {
    const FluxMode mode = flux_mode_of(cfg);
    EllipticOptions eopts;
    eopts.newton_tol = opts.newton_tol;
    eopts.max_iters = opts.max_newton;

    SweepOutcome out;
    const double t_new = base.t + dt;

    std::vector<double> ce_k = base.ce;
    std::vector<double> cs_k = base.cs;
    std::vector<double> csB_k = boundary_trace_field(mesh, cs_k);
    double T_k = base.T;

    double ce_scale = 0;
    for (double c : base.ce) ce_scale = std::max(ce_scale, std::abs(c));
    ce_scale = std::max(ce_scale, 1e-300);
    const double T_scale = std::max(cfg.thermal.T_amb, 1.0);

    PotentialSolution warm;
    bool have_warm = false;
    if (!base.phie_li.empty() && !base.phis.empty()) {
        warm.phie_li = base.phie_li;
        warm.phis = base.phis;
        have_warm = true;
    }

    for (int k = 0; k < opts.max_picard; ++k) {
        const StateSlice slice{ce_k, csB_k, T_k};
        const PotentialSolveResult res = solve_potentials(
            mesh, cfg, slice, I_end, mode, eopts, have_warm ? &warm : nullptr);
        if (!res.converged) {
            out.failure = "potential solve: " + res.message;
            return out;
        }
        warm = res.solution;
        have_warm = true;
        out.newton_max = std::max(out.newton_max, res.solution.newton_iters);

        out.heat = heat_sources(mesh, cfg, slice, res.solution, I_end);
        const ThermalRhs rhs = thermal_rhs(cfg.thermal, out.heat);

        std::vector<double> ce_next = step_electrolyte(mesh, cfg, base.ce, res.solution.j, dt);
        std::vector<double> cs_next(base.cs.size());
        step_all_particles(mesh, cfg, base.cs, res.solution.j, dt, opts.threads, cs_next);
        std::vector<double> csB_next = boundary_trace_field(mesh, cs_next);
        const double T_next = step_temperature(base.T, rhs, cfg.thermal, dt);

        double resid = std::abs(T_next - T_k) / T_scale;
        for (std::size_t i = 0; i < ce_next.size(); ++i)
            resid = std::max(resid, std::abs(ce_next[i] - ce_k[i]) / ce_scale);
        for (std::size_t e = 0; e < csB_next.size(); ++e)
            resid = std::max(resid, std::abs(csB_next[e] - csB_k[e]) / cfg.kinetics.cs_max);
        out.history.push_back(resid);
        out.iters = k + 1;

        ce_k = std::move(ce_next);
        cs_k = std::move(cs_next);
        csB_k = std::move(csB_next);
        T_k = T_next;

        CellState cand;
        cand.t = t_new;
        cand.T = T_k;
        cand.ce = ce_k;
        cand.cs = cs_k;
        cand.phie = res.solution.phie;
        cand.phie_li = res.solution.phie_li;
        cand.phis = res.solution.phis;

        if (auto bad = check_admissible(mesh, cfg, cand)) {
            out.admissibility = bad;
            return out;
        }

        if (resid <= opts.picard_tol) {
            out.converged = true;
            out.residual = resid;
            out.state = std::move(cand);
            out.potentials = std::move(warm);
            return out;
        }
    }
    out.residual = out.history.empty() ? 0.0 : out.history.back();
    out.failure = "fixed-point iteration did not reach picard_tol";
    return out;
}

}  // namespace

StepResult picard_step(const Mesh& mesh, const CellConfig& cfg, const CellState& base,
                       double I_end, double dt_target, const SolverOptions& opts) {
    StepResult result;
    StepReport& rep = result.report;
    double dt = dt_target;

    for (;;) {
        SweepOutcome sweep = attempt_step(mesh, cfg, base, I_end, dt, opts);
        rep.newton_iters_max = std::max(rep.newton_iters_max, sweep.newton_max);
        if (sweep.converged) {
            rep.dt = dt;
            rep.picard_iters = sweep.iters;
            rep.picard_residual = sweep.residual;
            rep.picard_history = std::move(sweep.history);
            rep.compat_anode_gap = sweep.potentials.compat_anode_gap;
            rep.compat_cathode_gap = sweep.potentials.compat_cathode_gap;
            rep.j_total = sweep.potentials.j_total;

            const double ce_ref = initial_ce_mean(mesh, cfg);
            if (auto fired = check_monitors(mesh, cfg, sweep.state, sweep.potentials, ce_ref)) {
                rep.halted = fired;
                return result;
            }
            result.state = std::move(sweep.state);
            result.potentials = std::move(sweep.potentials);
            result.heat = sweep.heat;
            return result;
        }
        // retry with a halved step; give up below dt_min
        if (dt * 0.5 >= opts.dt_min) {
            dt *= 0.5;
            ++rep.retries;
            continue;
        }
        rep.dt = dt;
        if (sweep.admissibility) {
            rep.halted = sweep.admissibility;
        } else {
            rep.halted = HaltReason{HaltTag::solver_failure, base.t + dt, -1, 0.0,
                                    sweep.failure + " (dt exhausted at " + std::to_string(dt) +
                                        ")"};
        }
        return result;
    }
}

RunResult run(const Mesh& mesh, const CellConfig& cfg, const CurrentProfile& profile,
              const SolverOptions& opts, const RecordHook& hook) {
    RunResult rr;
    const double ce_ref = initial_ce_mean(mesh, cfg);

    CellState state = initial_state(mesh, cfg);
    CellState first_state = state;

    auto solve_at = [&](const CellState& st, double I,
                        const PotentialSolution* warm) -> PotentialSolveResult {
        EllipticOptions eopts;
        eopts.newton_tol = opts.newton_tol;
        eopts.max_iters = opts.max_newton;
        const std::vector<double> csB = boundary_trace(mesh, st);
        const StateSlice slice{st.ce, csB, st.T};
        return solve_potentials(mesh, cfg, slice, I, flux_mode_of(cfg), eopts, warm);
    };

    auto make_record = [&](const CellState& st, const PotentialSolution& sol, double I,
                           const StepReport* srep, const HeatBreakdown& heat) {
        TimeSeriesRecord rec;
        rec.t = st.t;
        rec.I = I;
        rec.V = voltage(mesh, cfg, sol, I);
        rec.soc = soc(mesh, cfg, st.cs);
        rec.T = st.T;
        rec.ce_min = *std::min_element(st.ce.begin(), st.ce.end());
        rec.ce_max = *std::max_element(st.ce.begin(), st.ce.end());
        const std::vector<double> csB = boundary_trace(mesh, st);
        rec.csB_min = *std::min_element(csB.begin(), csB.end());
        rec.csB_max = *std::max_element(csB.begin(), csB.end());
        if (srep) {
            rec.dt = srep->dt;
            rec.picard_iters = srep->picard_iters;
            rec.newton_iters_max = srep->newton_iters_max;
            rec.picard_residual = srep->picard_residual;
            rec.compat_anode_gap = srep->compat_anode_gap;
            rec.compat_cathode_gap = srep->compat_cathode_gap;
            rec.j_total = srep->j_total;
        }
        rec.heat = heat;
        return rec;
    };

    auto emit = [&](const TimeSeriesRecord& rec, const CellState& st,
                    const PotentialSolution& sol) {
        rr.series.push_back(rec);
        if (hook) hook(rec, st, sol);
    };

    // initial elliptic solve at I(0+)
    {
        const double I0 = profile.pieces.empty() ? 0.0 : profile.value(0, 0.0);
        const PotentialSolveResult res = solve_at(state, I0, nullptr);
        if (!res.converged) {
            rr.halt = HaltReason{HaltTag::solver_failure, 0.0, -1, 0.0,
                                 "initial potential solve: " + res.message};
            rr.final_state = std::move(state);
            return rr;
        }
        state.phie = res.solution.phie;
        state.phie_li = res.solution.phie_li;
        state.phis = res.solution.phis;
        rr.max_newton_iters = std::max(rr.max_newton_iters, res.solution.newton_iters);
        if (auto fired = check_monitors(mesh, cfg, state, res.solution, ce_ref)) {
            rr.halt = fired;
            rr.final_state = std::move(state);
            return rr;
        }
        const std::vector<double> csB = boundary_trace(mesh, state);
        const StateSlice slice{state.ce, csB, state.T};
        const HeatBreakdown heat0 = heat_sources(mesh, cfg, slice, res.solution, I0);
        emit(make_record(state, res.solution, I0, nullptr, heat0), state, res.solution);
    }

    double dt_ctrl = opts.dt0;
    int easy_streak = 0;
    int since_record = 0;
    PotentialSolution last_sol;

    for (std::size_t piece = 0; piece < profile.piece_count() && !rr.halt; ++piece) {
        const double piece_end = profile.pieces[piece].t1();
        if (piece > 0) {
            // restart semantics: the applied current may jump at a breakpoint, so
            // re-solve the potentials with the new piece's current and emit the
            // post-jump record at the same time stamp
            const double I_new = profile.value(piece, state.t);
            const PotentialSolveResult res = solve_at(state, I_new, nullptr);
            if (!res.converged) {
                rr.halt = HaltReason{HaltTag::solver_failure, state.t, -1, 0.0,
                                     "restart potential solve: " + res.message};
                break;
            }
            state.phie = res.solution.phie;
            state.phie_li = res.solution.phie_li;
            state.phis = res.solution.phis;
            rr.max_newton_iters = std::max(rr.max_newton_iters, res.solution.newton_iters);
            const std::vector<double> csB = boundary_trace(mesh, state);
            const StateSlice slice{state.ce, csB, state.T};
            const HeatBreakdown heat = heat_sources(mesh, cfg, slice, res.solution, I_new);
            emit(make_record(state, res.solution, I_new, nullptr, heat), state, res.solution);
        }

        while (state.t < piece_end && !rr.halt) {
            const double remaining = piece_end - state.t;
            double dt_try = std::min(dt_ctrl, remaining);
            const bool landing = remaining <= dt_ctrl * (1.0 + 1e-12);
            if (landing) dt_try = remaining;

            const double I_end = profile.value(piece, state.t + dt_try);
            StepResult step = picard_step(mesh, cfg, state, I_end, dt_try, opts);

            rr.max_newton_iters = std::max(rr.max_newton_iters, step.report.newton_iters_max);
            if (step.report.halted) {
                rr.halt = step.report.halted;
                break;
            }

            state = std::move(step.state);
            if (landing && step.report.retries == 0) state.t = piece_end;  // exact landing
            last_sol = std::move(step.potentials);
            ++rr.steps_accepted;
            rr.max_picard_iters = std::max(rr.max_picard_iters, step.report.picard_iters);
            rr.max_compat_gap =
                std::max({rr.max_compat_gap, std::abs(step.report.compat_anode_gap),
                          std::abs(step.report.compat_cathode_gap)});
            rr.max_j_total = std::max(rr.max_j_total, std::abs(step.report.j_total));
            rr.expected_electrolyte_change +=
                step.report.dt * cfg.transport.alpha_e * step.report.j_total;

            if (step.report.retries > 0) {
                dt_ctrl = step.report.dt;
                easy_streak = 0;
            } else if (++easy_streak >= opts.grow_after) {
                dt_ctrl = std::min(dt_ctrl * opts.growth, opts.dt_max);
                easy_streak = 0;
            }

            ++since_record;
            const bool at_boundary = state.t >= piece_end;
            if (since_record >= opts.record_every || at_boundary) {
                emit(make_record(state, last_sol, I_end, &step.report, step.heat), state,
                     last_sol);
                since_record = 0;
            }
        }
    }

    rr.ledger = conservation_ledger(mesh, cfg, first_state, state, rr.expected_electrolyte_change);
    rr.final_state = std::move(state);
    return rr;
}

}  // namespace p2d
