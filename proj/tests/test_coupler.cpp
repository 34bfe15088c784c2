#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "p2dsim/coupler.hpp"
#include "p2dsim/io.hpp"
#include "p2dsim/profile.hpp"

using namespace p2d;

namespace {

CellConfig reference_config() { return load_config(std::string(TEST_CONFIG_DIR) + "/reference.json"); }

PotentialSolution zero_solution(const Mesh& mesh) {
    PotentialSolution sol;
    sol.phie_li.assign(mesh.cells(), 0.0);
    sol.phie.assign(mesh.cells(), 0.0);
    sol.phis.assign(mesh.electrode_count(), 0.0);
    sol.j.assign(mesh.cells(), 0.0);
    return sol;
}

}  // namespace

TEST_CASE("run mode selects the flux evaluation") {
    CellConfig cfg = reference_config();
    cfg.run_mode = RunMode::Exponential;
    CHECK(flux_mode_of(cfg).kind == FluxMode::Kind::Exponential);

    cfg.run_mode = RunMode::Truncated;
    cfg.s_inf = 4.0;
    FluxMode mode = flux_mode_of(cfg);
    CHECK(mode.kind == FluxMode::Kind::Truncated);
    CHECK(mode.s_inf == 4.0);

    cfg.run_mode = RunMode::TruncatedLinearFT;
    mode = flux_mode_of(cfg);
    CHECK(mode.kind == FluxMode::Kind::Truncated);
    CHECK(mode.s_inf == 4.0);
}

TEST_CASE("each monitor fires with its own tag and location") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const CellState base = initial_state(mesh, cfg);
    const PotentialSolution sol = zero_solution(mesh);
    const double ce_ref = 1.2e-3;

    CHECK_FALSE(check_monitors(mesh, cfg, base, sol, ce_ref).has_value());

    CellState s = base;
    s.ce[5] = 1e-20;
    auto halt = check_monitors(mesh, cfg, s, sol, ce_ref);
    REQUIRE(halt.has_value());
    CHECK(halt->tag == HaltTag::ce_min_zero);
    CHECK(halt->cell == 5);
    CHECK(std::string(to_string(halt->tag)) == "ce_min_zero");

    s = base;
    s.ce[7] = 2e5;  // cap is ce_cap_rel * mean initial ce = 1.2e5
    halt = check_monitors(mesh, cfg, s, sol, ce_ref);
    REQUIRE(halt.has_value());
    CHECK(halt->tag == HaltTag::ce_unbounded);
    CHECK(halt->cell == 7);

    s = base;
    for (double& v : s.solid(mesh, 3)) v = 1e-9;  // below csB_margin_rel * cs_max
    halt = check_monitors(mesh, cfg, s, sol, ce_ref);
    REQUIRE(halt.has_value());
    CHECK(halt->tag == HaltTag::csB_min_zero);
    CHECK(halt->cell == mesh.cell_of_electrode(3));

    s = base;
    for (double& v : s.solid(mesh, 20)) v = cfg.kinetics.cs_max * (1.0 - 1e-9);
    halt = check_monitors(mesh, cfg, s, sol, ce_ref);
    REQUIRE(halt.has_value());
    CHECK(halt->tag == HaltTag::csB_max_saturation);
    CHECK(halt->cell == mesh.cell_of_electrode(20));

    s = base;
    s.T = 0.5;
    halt = check_monitors(mesh, cfg, s, sol, ce_ref);
    REQUIRE(halt.has_value());
    CHECK(halt->tag == HaltTag::T_min_zero);

    s = base;
    s.T = 6000.0;
    halt = check_monitors(mesh, cfg, s, sol, ce_ref);
    REQUIRE(halt.has_value());
    CHECK(halt->tag == HaltTag::T_unbounded);

    PotentialSolution far = sol;
    far.phis[2] = 200.0;  // |phis - phie_li| above the potential cap
    halt = check_monitors(mesh, cfg, base, far, ce_ref);
    REQUIRE(halt.has_value());
    CHECK(halt->tag == HaltTag::potential_divergence);
    CHECK(halt->cell == mesh.cell_of_electrode(2));
}

TEST_CASE("one fixed-point step converges with a contracting update history") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    CellState base = initial_state(mesh, cfg);

    // the stepping contract: the base state carries the solved potentials of its
    // own time level (the run loop establishes this with an initial solve)
    const std::vector<double> csB = boundary_trace(mesh, base);
    EllipticOptions eopts;
    eopts.newton_tol = cfg.solver.newton_tol;
    eopts.max_iters = cfg.solver.max_newton;
    const PotentialSolveResult res0 = solve_potentials(
        mesh, cfg, StateSlice{base.ce, csB, base.T}, 3.0, flux_mode_of(cfg), eopts);
    REQUIRE(res0.converged);
    base.phie_li = res0.solution.phie_li;
    base.phis = res0.solution.phis;
    base.phie = res0.solution.phie;

    const StepResult res = picard_step(mesh, cfg, base, 3.0, 0.25, cfg.solver);
    REQUIRE_FALSE(res.report.halted.has_value());
    CHECK(res.state.t == 0.25);
    CHECK(res.report.dt == 0.25);
    CHECK(res.report.retries == 0);
    CHECK(res.report.picard_iters <= cfg.solver.max_picard);
    CHECK(res.report.picard_residual <= cfg.solver.picard_tol);
    REQUIRE(res.report.picard_history.size() >= 2);
    for (std::size_t k = 1; k < res.report.picard_history.size(); ++k)
        CHECK(res.report.picard_history[k] < res.report.picard_history[k - 1]);

    // the step moved mass in the expected direction: charge pushes anode up
    CHECK(res.state.T != base.T);
    CHECK(res.potentials.j[0] != 0.0);
}

TEST_CASE("an unreachable tolerance exhausts dt halving into a solver failure") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const CellState base = initial_state(mesh, cfg);

    SolverOptions opts = cfg.solver;
    opts.max_picard = 1;
    opts.picard_tol = 1e-18;
    opts.dt_min = opts.dt0 / 4.0;

    const StepResult res = picard_step(mesh, cfg, base, 3.0, opts.dt0, opts);
    REQUIRE(res.report.halted.has_value());
    CHECK(res.report.halted->tag == HaltTag::solver_failure);
    CHECK(res.report.halted->detail.find("dt exhausted") != std::string::npos);
    CHECK(res.report.retries >= 2);
}

TEST_CASE("time loop lands exactly on breakpoints and re-records there") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const CurrentProfile profile = CurrentProfile::square_cycle(3.0, 4.0);
    SolverOptions opts = cfg.solver;
    opts.dt0 = opts.dt_max = 0.25;

    int hook_calls = 0;
    const RunResult rr = run(mesh, cfg, profile, opts,
                             [&](const TimeSeriesRecord&, const CellState&,
                                 const PotentialSolution&) { ++hook_calls; });
    REQUIRE_FALSE(rr.halt.has_value());
    CHECK(rr.final_state.t == 8.0);
    CHECK(rr.steps_accepted == 32);
    REQUIRE_FALSE(rr.series.empty());
    CHECK(rr.series.front().t == 0.0);
    CHECK(rr.series.back().t == 8.0);
    CHECK(hook_calls == static_cast<int>(rr.series.size()));

    // the piece boundary is recorded twice: step landing + restart re-solve
    int at_boundary = 0;
    for (const TimeSeriesRecord& r : rr.series)
        if (r.t == 4.0) ++at_boundary;
    CHECK(at_boundary == 2);
    CHECK(rr.series.size() == 34);  // 1 initial + 16 + restart + 16

    CHECK(rr.max_picard_iters <= cfg.solver.max_picard);
    CHECK(rr.ledger.electrolyte_drift_rel <= 1e-10);
}

TEST_CASE("repeated runs are deterministic") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const CurrentProfile profile = CurrentProfile::square_cycle(3.0, 2.0);
    SolverOptions opts = cfg.solver;
    opts.dt0 = opts.dt_max = 0.25;

    const RunResult a = run(mesh, cfg, profile, opts);
    const RunResult b = run(mesh, cfg, profile, opts);
    REQUIRE(a.series.size() == b.series.size());
    for (std::size_t k = 0; k < a.series.size(); ++k) {
        CHECK(a.series[k].t == b.series[k].t);
        CHECK(a.series[k].V == b.series[k].V);
        CHECK(a.series[k].T == b.series[k].T);
        CHECK(a.series[k].ce_min == b.series[k].ce_min);
    }
    for (std::size_t i = 0; i < a.final_state.ce.size(); ++i)
        CHECK(a.final_state.ce[i] == b.final_state.ce[i]);
}

TEST_CASE("dt grows after consecutive easy steps but respects dt_max and t_end") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const CurrentProfile profile = CurrentProfile::constant(3.0, 8.0);
    SolverOptions opts = cfg.solver;
    opts.dt0 = 0.1;
    opts.dt_max = 0.4;
    opts.growth = 2.0;
    opts.grow_after = 2;

    const RunResult rr = run(mesh, cfg, profile, opts);
    REQUIRE_FALSE(rr.halt.has_value());
    CHECK(rr.final_state.t == 8.0);
    double dt_seen = 0;
    for (const TimeSeriesRecord& r : rr.series) {
        dt_seen = std::max(dt_seen, r.dt);
        CHECK(r.dt <= opts.dt_max * (1.0 + 1e-12));
    }
    CHECK(dt_seen == 0.4);
}
