#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "p2dsim/coupler.hpp"
#include "p2dsim/io.hpp"
#include "p2dsim/verify.hpp"

namespace {

// exit codes: 0 success, 1 validation failure, 2 halt-by-monitor, 3 solver failure
constexpr int kOk = 0, kValidation = 1, kHalt = 2, kSolverFailure = 3;

struct CommonFlags {
    std::string config_path;
    std::string mode;  // "", "exponential", "truncated", "truncated+linearFT"
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
    auto* opt = cmd->add_option("--config", f.config_path, "cell config JSON");
    if (config_required) opt->required();
    cmd->add_option("--mode", f.mode, "flux/thermal mode override")
        ->check(CLI::IsMember({"exponential", "truncated", "truncated+linearFT"}));
}

void apply_mode(p2d::CellConfig& cfg, const std::string& mode) {
    if (mode.empty()) return;
    if (mode == "exponential") cfg.run_mode = p2d::RunMode::Exponential;
    if (mode == "truncated") cfg.run_mode = p2d::RunMode::Truncated;
    if (mode == "truncated+linearFT") {
        cfg.run_mode = p2d::RunMode::TruncatedLinearFT;
        cfg.thermal.mode = p2d::ThermalParams::Mode::LinearTruncated;
    }
}

int run_simulate(const CommonFlags& common, const std::string& profile_path,
                 const std::string& out_dir, double dt0, double picard_tol, double newton_tol,
                 const std::string& snapshots, int threads) {
    namespace fs = std::filesystem;
    p2d::CellConfig cfg;
    try {
        cfg = p2d::load_config(common.config_path);
    } catch (const p2d::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kValidation;
    }
    apply_mode(cfg, common.mode);
    if (dt0 > 0) cfg.solver.dt0 = dt0;
    if (picard_tol > 0) cfg.solver.picard_tol = picard_tol;
    if (newton_tol > 0) cfg.solver.newton_tol = newton_tol;
    if (threads > 0) cfg.solver.threads = threads;
    if (!snapshots.empty()) {
        if (snapshots == "none")
            cfg.solver.snapshot_every = 0;
        else if (snapshots == "all")
            cfg.solver.snapshot_every = 1;
        else
            cfg.solver.snapshot_every = std::max(0, std::atoi(snapshots.c_str()));
    }
    if (!profile_path.empty()) {
        try {
            // duplicated sample times mark jump discontinuities = piece boundaries
            p2d::CurrentProfile probe = p2d::load_profile_csv(profile_path, {});
            std::vector<double> breaks;
            const auto& t = probe.pieces.front().t;
            for (std::size_t k = 1; k < t.size(); ++k)
                if (t[k] == t[k - 1]) breaks.push_back(t[k]);
            cfg.profile = p2d::load_profile_csv(profile_path, breaks);
        } catch (const p2d::ConfigError& e) {
            std::cerr << "profile error: " << e.what() << "\n";
            return kValidation;
        }
    }

    const p2d::ValidationReport vrep = p2d::validate_config(cfg);
    if (!vrep.ok()) {
        std::cerr << vrep.summary();
        return kValidation;
    }
    for (const auto& w : vrep.warnings)
        std::cerr << "warning: " << w.check << ": " << w.message << "\n";
    const p2d::ConditionReport crep = p2d::check_exponent_conditions(
        cfg.kinetics, cfg.transport.alpha_phie, cfg.admissible.T_lo, cfg.admissible.T_hi);
    if (!crep.all_satisfied)
        std::cerr << "warning: exponent conditions violated (blow-up exclusion not "
                     "guaranteed)\n"
                  << crep.summary();

    p2d::Mesh mesh;
    try {
        mesh = p2d::build_mesh(cfg.geometry, cfg.mesh);
    } catch (const std::invalid_argument& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return kValidation;
    }

    fs::create_directories(out_dir);
    if (cfg.solver.snapshot_every > 0) fs::create_directories(out_dir + "/snapshots");
    std::ofstream series(out_dir + "/series.csv");
    if (!series) {
        std::cerr << "cannot write " << out_dir << "/series.csv\n";
        return kValidation;
    }
    p2d::write_series_header(series);

    int record_idx = 0, snapshot_idx = 0;
    const int snap_every = cfg.solver.snapshot_every;
    p2d::RecordHook hook = [&](const p2d::TimeSeriesRecord& rec, const p2d::CellState& state,
                               const p2d::PotentialSolution& sol) {
        p2d::write_series_record(series, rec);
        if (snap_every > 0 && record_idx % snap_every == 0) {
            char name[32];
            std::snprintf(name, sizeof name, "%04d.csv", snapshot_idx++);
            std::ofstream snap(out_dir + "/snapshots/" + name);
            p2d::write_snapshot_csv(snap, mesh, cfg, state, sol, rec.I);
        }
        ++record_idx;
    };

    p2d::RunResult result;
    try {
        result = p2d::run(mesh, cfg, cfg.profile, cfg.solver, hook);
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kSolverFailure;
    }
    series.close();

    std::ofstream report(out_dir + "/report.json");
    report << p2d::report_json(cfg, result);
    report.close();

    if (result.halt) {
        std::cout << "halted tag=" << p2d::to_string(result.halt->tag)
                  << " t=" << result.halt->time << " cell=" << result.halt->cell
                  << " value=" << result.halt->value << "\n"
                  << "  " << result.halt->detail << "\n";
        return result.halt->tag == p2d::HaltTag::solver_failure ? kSolverFailure : kHalt;
    }
    std::cout << "completed t=" << result.final_state.t << " steps=" << result.steps_accepted;
    if (!result.series.empty())
        std::cout << " V=" << result.series.back().V << " T=" << result.series.back().T
                  << " soc=" << result.series.back().soc;
    std::cout << "\n";
    return kOk;
}

int run_check_params(const CommonFlags& common) {
    p2d::CellConfig cfg;
    try {
        cfg = p2d::load_config(common.config_path);
    } catch (const p2d::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kValidation;
    }
    apply_mode(cfg, common.mode);
    const p2d::ValidationReport vrep = p2d::validate_config(cfg);
    const p2d::ConditionReport crep = p2d::check_exponent_conditions(
        cfg.kinetics, cfg.transport.alpha_phie, cfg.admissible.T_lo, cfg.admissible.T_hi);
    std::cout << "{ \"validation\": " << p2d::to_json_string(vrep)
              << ", \"exponent_conditions\": " << p2d::to_json_string(crep) << "}\n";
    if (!vrep.ok() || !crep.all_satisfied) {
        std::cerr << vrep.summary() << crep.summary();
        return kValidation;
    }
    return kOk;
}

int run_verify(const std::string& suite) {
    std::vector<p2d::OrderCheck> checks;
    try {
        checks = p2d::run_verification(suite);
    } catch (const std::exception& e) {
        std::cerr << "verify error: " << e.what() << "\n";
        return kValidation;
    }
    std::cout << p2d::format_order_checks(checks);
    return p2d::all_pass(checks) ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-2D lithium-ion cell simulator"};
    app.require_subcommand(1);

    CommonFlags sim_common, check_common;
    std::string profile_path, out_dir = "out", snapshots;
    double dt0 = 0, picard_tol = 0, newton_tol = 0;
    int threads = 0;

    CLI::App* sim = app.add_subcommand("simulate", "run a full simulation");
    add_common(sim, sim_common, true);
    sim->add_option("--profile", profile_path, "current profile CSV override (t,I rows)");
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("--dt0", dt0, "initial time step");
    sim->add_option("--picard-tol", picard_tol, "fixed-point convergence tolerance");
    sim->add_option("--newton-tol", newton_tol, "elliptic Newton tolerance");
    sim->add_option("--snapshots", snapshots, "none | all | N (every N records)");
    sim->add_option("--threads", threads, "particle-solve worker threads");

    CLI::App* check = app.add_subcommand("check-params", "validate a config and the exponent conditions");
    add_common(check, check_common, true);

    std::string suite = "all";
    CLI::App* verify = app.add_subcommand("verify", "run the built-in convergence-order suites");
    verify->add_option("--suite", suite, "all | elliptic | electrolyte | solid-diffusion")
        ->check(CLI::IsMember({"all", "elliptic", "electrolyte", "solid-diffusion"}));

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed())
        return run_simulate(sim_common, profile_path, out_dir, dt0, picard_tol, newton_tol,
                            snapshots, threads);
    if (check->parsed()) return run_check_params(check_common);
    return run_verify(suite);
}
