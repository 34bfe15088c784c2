#include "p2dsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace p2d {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

void check_keys(const json& j, const std::string& path, std::set<std::string> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(path, "unknown key '" + it.key() + "'");
}

double get_num(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) fail(path, "missing required number '" + key + "'");
    if (!j[key].is_number()) fail(path + "." + key, "expected a number");
    return j[key].get<double>();
}

double get_num_or(const json& j, const std::string& path, const std::string& key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) fail(path + "." + key, "expected a number");
    return j[key].get<double>();
}

int get_int_or(const json& j, const std::string& path, const std::string& key, int dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number_integer()) fail(path + "." + key, "expected an integer");
    return j[key].get<int>();
}

Polynomial get_poly(const json& j, const std::string& path) {
    Polynomial p;
    if (j.is_number()) {
        p.c = {j.get<double>()};
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (!v.is_number()) fail(path, "polynomial coefficients must be numbers");
            p.c.push_back(v.get<double>());
        }
    } else {
        fail(path, "expected a number or coefficient array");
    }
    return p;
}

Polynomial get_poly_field(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) fail(path, "missing required entry '" + key + "'");
    return get_poly(j[key], path + "." + key);
}

// {"anode": poly, "cathode": poly} with an optional "separator"
RegionPoly get_region_poly(const json& j, const std::string& path) {
    if (j.is_number() || j.is_array()) {
        const Polynomial p = get_poly(j, path);
        return RegionPoly{p, p, p};
    }
    check_keys(j, path, {"anode", "separator", "cathode"});
    RegionPoly rp;
    rp.anode = get_poly_field(j, path, "anode");
    rp.cathode = get_poly_field(j, path, "cathode");
    rp.separator = j.contains("separator") ? get_poly(j["separator"], path + ".separator")
                                           : rp.anode;
    return rp;
}

CoeffTable get_coeff_table(const json& j, const std::string& path, bool allow_cs) {
    CoeffTable t;
    if (!j.is_array()) fail(path, "expected an array of {i,j,k,c} terms");
    for (std::size_t n = 0; n < j.size(); ++n) {
        const json& e = j[n];
        const std::string epath = path + "[" + std::to_string(n) + "]";
        check_keys(e, epath, allow_cs ? std::set<std::string>{"i", "j", "k", "c"}
                                      : std::set<std::string>{"i", "k", "c"});
        CoeffTable::Term term;
        term.i = get_int_or(e, epath, "i", 0);
        term.j = allow_cs ? get_int_or(e, epath, "j", 0) : 0;
        term.k = get_int_or(e, epath, "k", 0);
        term.c = get_num(e, epath, "c");
        t.terms.push_back(term);
    }
    return t;
}

RunMode parse_mode(const std::string& s, const std::string& path) {
    if (s == "exponential") return RunMode::Exponential;
    if (s == "truncated") return RunMode::Truncated;
    if (s == "truncated+linearFT") return RunMode::TruncatedLinearFT;
    fail(path, "unknown mode '" + s + "' (expected exponential, truncated, truncated+linearFT)");
}

}  // namespace

CellConfig parse_config_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    check_keys(j, origin,
               {"units", "geometry", "transport", "kinetics", "thermal", "mesh", "initial",
                "admissible", "monitors", "solver", "mode", "profile"});

    CellConfig cfg;

    if (j.contains("units")) {
        check_keys(j["units"], origin + ".units", {"concentration"});
        const std::string u = j["units"].value("concentration", "internal");
        if (u == "internal")
            cfg.input_unit = ConcentrationUnit::Internal;
        else if (u == "mol_per_m3")
            cfg.input_unit = ConcentrationUnit::MolPerM3;
        else if (u == "mol_per_cm3")
            cfg.input_unit = ConcentrationUnit::MolPerCm3;
        else
            fail(origin + ".units.concentration", "unknown unit '" + u + "'");
    }

    {
        if (!j.contains("geometry")) fail(origin, "missing section 'geometry'");
        const json& g = j["geometry"];
        const std::string p = origin + ".geometry";
        check_keys(g, p, {"L", "L1", "delta", "Rs_neg", "Rs_pos", "A", "Rf"});
        cfg.geometry.L = get_num(g, p, "L");
        cfg.geometry.L1 = get_num(g, p, "L1");
        cfg.geometry.delta = get_num(g, p, "delta");
        cfg.geometry.Rs_neg = get_num(g, p, "Rs_neg");
        cfg.geometry.Rs_pos = get_num(g, p, "Rs_pos");
        cfg.geometry.A = get_num(g, p, "A");
        cfg.geometry.Rf = get_num_or(g, p, "Rf", 0.0);
    }

    {
        if (!j.contains("transport")) fail(origin, "missing section 'transport'");
        const json& t = j["transport"];
        const std::string p = origin + ".transport";
        check_keys(t, p,
                   {"De", "De0", "Ds_neg", "Ds_pos", "sigma", "sigma0", "kappa", "alpha_e",
                    "alpha_s_neg", "alpha_s_pos", "alpha_phie", "f_phie"});
        if (!t.contains("De")) fail(p, "missing required entry 'De'");
        cfg.transport.De = get_region_poly(t["De"], p + ".De");
        cfg.transport.De0 = get_num(t, p, "De0");
        cfg.transport.Ds_neg = get_num(t, p, "Ds_neg");
        cfg.transport.Ds_pos = get_num(t, p, "Ds_pos");
        if (!t.contains("sigma")) fail(p, "missing required entry 'sigma'");
        check_keys(t["sigma"], p + ".sigma", {"anode", "cathode"});
        cfg.transport.sigma_anode = get_num(t["sigma"], p + ".sigma", "anode");
        cfg.transport.sigma_cathode = get_num(t["sigma"], p + ".sigma", "cathode");
        cfg.transport.sigma0 = get_num(t, p, "sigma0");
        if (!t.contains("kappa")) fail(p, "missing required entry 'kappa'");
        {
            const json& k = t["kappa"];
            const std::string kp = p + ".kappa";
            check_keys(k, kp, {"terms", "ce_ref", "T_ref", "kappa0", "kappa1"});
            if (!k.contains("terms")) fail(kp, "missing required entry 'terms'");
            cfg.transport.kappa.table = get_coeff_table(k["terms"], kp + ".terms", false);
            cfg.transport.kappa.table.ce_ref = get_num_or(k, kp, "ce_ref", 1.0);
            cfg.transport.kappa.table.T_ref = get_num_or(k, kp, "T_ref", 1.0);
            cfg.transport.kappa.kappa0 = get_num(k, kp, "kappa0");
            cfg.transport.kappa.kappa1 = get_num(k, kp, "kappa1");
        }
        cfg.transport.alpha_e = get_num(t, p, "alpha_e");
        cfg.transport.alpha_s_neg = get_num(t, p, "alpha_s_neg");
        cfg.transport.alpha_s_pos = get_num(t, p, "alpha_s_pos");
        cfg.transport.alpha_phie = get_num(t, p, "alpha_phie");
        if (t.contains("f_phie")) {
            const json& f = t["f_phie"];
            if (f.is_string() && f.get<std::string>() == "ln") {
                cfg.transport.f_phie.kind = FPhie::Kind::NaturalLog;
            } else if (f.is_array()) {
                cfg.transport.f_phie.kind = FPhie::Kind::Poly;
                cfg.transport.f_phie.poly = get_poly(f, p + ".f_phie");
            } else {
                fail(p + ".f_phie", "expected \"ln\" or a polynomial coefficient array");
            }
        }
    }

    {
        if (!j.contains("kinetics")) fail(origin, "missing section 'kinetics'");
        const json& k = j["kinetics"];
        const std::string p = origin + ".kinetics";
        check_keys(k, p,
                   {"delta1", "delta2", "gamma1", "gamma2", "alpha_a", "alpha_s", "beta_a",
                    "cs_max", "s_inf", "ocp"});
        for (const char* name : {"delta1", "delta2"}) {
            if (!k.contains(name)) fail(p, std::string("missing required entry '") + name + "'");
            check_keys(k[name], p + "." + name, {"anode", "cathode"});
        }
        cfg.kinetics.delta1_neg = get_num(k["delta1"], p + ".delta1", "anode");
        cfg.kinetics.delta1_pos = get_num(k["delta1"], p + ".delta1", "cathode");
        cfg.kinetics.delta2_neg = get_num(k["delta2"], p + ".delta2", "anode");
        cfg.kinetics.delta2_pos = get_num(k["delta2"], p + ".delta2", "cathode");
        cfg.kinetics.gamma1 = get_num(k, p, "gamma1");
        cfg.kinetics.gamma2 = get_num(k, p, "gamma2");
        cfg.kinetics.alpha_a = get_num(k, p, "alpha_a");
        cfg.kinetics.alpha_s_exp = get_num(k, p, "alpha_s");
        cfg.kinetics.beta_a = get_num(k, p, "beta_a");
        cfg.kinetics.cs_max = get_num(k, p, "cs_max");
        if (k.contains("s_inf")) cfg.s_inf = get_num(k, p, "s_inf");

        if (!k.contains("ocp")) fail(p, "missing section 'ocp'");
        const json& o = k["ocp"];
        const std::string op = p + ".ocp";
        check_keys(o, op, {"lambda_min", "lambda_max", "mu", "p"});
        auto pair_poly = [&](const char* name, Polynomial& neg, Polynomial& pos) {
            if (!o.contains(name)) fail(op, std::string("missing entry '") + name + "'");
            const std::string np = op + "." + name;
            check_keys(o[name], np, {"anode", "cathode"});
            neg = get_poly_field(o[name], np, "anode");
            pos = get_poly_field(o[name], np, "cathode");
        };
        pair_poly("lambda_min", cfg.kinetics.ocp.lambda_min_neg, cfg.kinetics.ocp.lambda_min_pos);
        pair_poly("lambda_max", cfg.kinetics.ocp.lambda_max_neg, cfg.kinetics.ocp.lambda_max_pos);
        pair_poly("mu", cfg.kinetics.ocp.mu_neg, cfg.kinetics.ocp.mu_pos);
        if (o.contains("p")) {
            const json& pp = o["p"];
            const std::string ppath = op + ".p";
            check_keys(pp, ppath, {"anode", "cathode", "bound", "ce_ref", "T_ref"});
            if (pp.contains("anode"))
                cfg.kinetics.ocp.p_neg = get_coeff_table(pp["anode"], ppath + ".anode", true);
            if (pp.contains("cathode"))
                cfg.kinetics.ocp.p_pos = get_coeff_table(pp["cathode"], ppath + ".cathode", true);
            cfg.kinetics.ocp.p_bound = get_num(pp, ppath, "bound");
            const double ce_ref = get_num_or(pp, ppath, "ce_ref", 1.0);
            const double T_ref = get_num_or(pp, ppath, "T_ref", 1.0);
            for (CoeffTable* t : {&cfg.kinetics.ocp.p_neg, &cfg.kinetics.ocp.p_pos}) {
                t->ce_ref = ce_ref;
                t->T_ref = T_ref;
                t->cs_ref = cfg.kinetics.cs_max;  // cs enters p normalized by cs_max
            }
        }
    }

    {
        if (!j.contains("thermal")) fail(origin, "missing section 'thermal'");
        const json& t = j["thermal"];
        const std::string p = origin + ".thermal";
        check_keys(t, p, {"mode", "alpha_T", "T_amb", "B_T", "B_T_max", "A_T", "A_T_min", "A_T_max"});
        const std::string m = t.value("mode", "full");
        if (m == "full")
            cfg.thermal.mode = ThermalParams::Mode::Full;
        else if (m == "linear")
            cfg.thermal.mode = ThermalParams::Mode::LinearTruncated;
        else if (m == "zero")
            cfg.thermal.mode = ThermalParams::Mode::Zero;
        else
            fail(p + ".mode", "unknown thermal mode '" + m + "'");
        cfg.thermal.alpha_T = get_num(t, p, "alpha_T");
        cfg.thermal.T_amb = get_num(t, p, "T_amb");
        cfg.thermal.B_T = get_num_or(t, p, "B_T", 0.0);
        cfg.thermal.B_T_max = get_num_or(t, p, "B_T_max", 0.0);
        cfg.thermal.A_T = get_num_or(t, p, "A_T", 0.0);
        cfg.thermal.A_T_min = get_num_or(t, p, "A_T_min", 0.0);
        cfg.thermal.A_T_max = get_num_or(t, p, "A_T_max", 0.0);
    }

    if (j.contains("mesh")) {
        const json& m = j["mesh"];
        const std::string p = origin + ".mesh";
        check_keys(m, p,
                   {"n_anode", "n_separator", "n_cathode", "n_radial_neg", "n_radial_pos",
                    "grading_anode", "grading_separator", "grading_cathode"});
        cfg.mesh.n_anode = get_int_or(m, p, "n_anode", cfg.mesh.n_anode);
        cfg.mesh.n_separator = get_int_or(m, p, "n_separator", cfg.mesh.n_separator);
        cfg.mesh.n_cathode = get_int_or(m, p, "n_cathode", cfg.mesh.n_cathode);
        cfg.mesh.n_radial_neg = get_int_or(m, p, "n_radial_neg", cfg.mesh.n_radial_neg);
        cfg.mesh.n_radial_pos = get_int_or(m, p, "n_radial_pos", cfg.mesh.n_radial_pos);
        cfg.mesh.grading_anode = get_num_or(m, p, "grading_anode", 1.0);
        cfg.mesh.grading_separator = get_num_or(m, p, "grading_separator", 1.0);
        cfg.mesh.grading_cathode = get_num_or(m, p, "grading_cathode", 1.0);
    }

    {
        if (!j.contains("initial")) fail(origin, "missing section 'initial'");
        const json& i = j["initial"];
        const std::string p = origin + ".initial";
        check_keys(i, p, {"ce0", "cs0_neg", "cs0_pos", "T0"});
        if (!i.contains("ce0")) fail(p, "missing required entry 'ce0'");
        cfg.initial.ce0 = get_poly(i["ce0"], p + ".ce0");
        cfg.initial.cs0_neg = get_num(i, p, "cs0_neg");
        cfg.initial.cs0_pos = get_num(i, p, "cs0_pos");
        cfg.initial.T0 = get_num(i, p, "T0");
    }

    if (j.contains("admissible")) {
        const json& a = j["admissible"];
        const std::string p = origin + ".admissible";
        check_keys(a, p, {"ce", "T"});
        auto get_range = [&](const char* key, double& lo, double& hi) {
            if (!a.contains(key)) fail(p, std::string("missing range '") + key + "'");
            const json& r = a[key];
            if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
                fail(p + "." + key, "expected [lo, hi]");
            lo = r[0].get<double>();
            hi = r[1].get<double>();
        };
        get_range("ce", cfg.admissible.ce_lo, cfg.admissible.ce_hi);
        get_range("T", cfg.admissible.T_lo, cfg.admissible.T_hi);
    } else {
        // default box around the initial data
        double ce_lo = cfg.initial.ce0(0.0), ce_hi = ce_lo;
        for (int s = 0; s <= 32; ++s) {
            const double v = cfg.initial.ce0(cfg.geometry.L * s / 32.0);
            ce_lo = std::min(ce_lo, v);
            ce_hi = std::max(ce_hi, v);
        }
        cfg.admissible.ce_lo = 1e-3 * ce_lo;
        cfg.admissible.ce_hi = 1e3 * ce_hi;
        cfg.admissible.T_lo = 0.8 * std::min(cfg.initial.T0, cfg.thermal.T_amb);
        cfg.admissible.T_hi = 1.25 * std::max(cfg.initial.T0, cfg.thermal.T_amb);
    }

    if (j.contains("monitors")) {
        const json& m = j["monitors"];
        const std::string p = origin + ".monitors";
        check_keys(m, p,
                   {"ce_floor_rel", "ce_cap_rel", "csB_margin_rel", "T_min", "T_max",
                    "potential_cap"});
        cfg.monitors.ce_floor_rel = get_num_or(m, p, "ce_floor_rel", cfg.monitors.ce_floor_rel);
        cfg.monitors.ce_cap_rel = get_num_or(m, p, "ce_cap_rel", cfg.monitors.ce_cap_rel);
        cfg.monitors.csB_margin_rel =
            get_num_or(m, p, "csB_margin_rel", cfg.monitors.csB_margin_rel);
        cfg.monitors.T_min = get_num_or(m, p, "T_min", cfg.monitors.T_min);
        cfg.monitors.T_max = get_num_or(m, p, "T_max", cfg.monitors.T_max);
        cfg.monitors.potential_cap = get_num_or(m, p, "potential_cap", cfg.monitors.potential_cap);
    }

    if (j.contains("solver")) {
        const json& s = j["solver"];
        const std::string p = origin + ".solver";
        check_keys(s, p,
                   {"dt0", "dt_min", "dt_max", "growth", "grow_after", "picard_tol", "max_picard",
                    "newton_tol", "max_newton", "record_every", "snapshot_every", "threads"});
        cfg.solver.dt0 = get_num_or(s, p, "dt0", cfg.solver.dt0);
        cfg.solver.dt_min = get_num_or(s, p, "dt_min", cfg.solver.dt_min);
        cfg.solver.dt_max = get_num_or(s, p, "dt_max", cfg.solver.dt_max);
        cfg.solver.growth = get_num_or(s, p, "growth", cfg.solver.growth);
        cfg.solver.grow_after = get_int_or(s, p, "grow_after", cfg.solver.grow_after);
        cfg.solver.picard_tol = get_num_or(s, p, "picard_tol", cfg.solver.picard_tol);
        cfg.solver.max_picard = get_int_or(s, p, "max_picard", cfg.solver.max_picard);
        cfg.solver.newton_tol = get_num_or(s, p, "newton_tol", cfg.solver.newton_tol);
        cfg.solver.max_newton = get_int_or(s, p, "max_newton", cfg.solver.max_newton);
        cfg.solver.record_every = get_int_or(s, p, "record_every", cfg.solver.record_every);
        cfg.solver.snapshot_every = get_int_or(s, p, "snapshot_every", cfg.solver.snapshot_every);
        cfg.solver.threads = get_int_or(s, p, "threads", cfg.solver.threads);
    }

    if (j.contains("mode")) {
        if (!j["mode"].is_string()) fail(origin + ".mode", "expected a string");
        cfg.run_mode = parse_mode(j["mode"].get<std::string>(), origin + ".mode");
    }
    if (cfg.run_mode == RunMode::TruncatedLinearFT)
        cfg.thermal.mode = ThermalParams::Mode::LinearTruncated;

    {
        if (!j.contains("profile")) fail(origin, "missing section 'profile'");
        const json& pr = j["profile"];
        const std::string p = origin + ".profile";
        check_keys(pr, p, {"pieces", "csv", "breakpoints"});
        if (pr.contains("pieces")) {
            if (!pr["pieces"].is_array()) fail(p + ".pieces", "expected an array");
            for (std::size_t k = 0; k < pr["pieces"].size(); ++k) {
                const json& pc = pr["pieces"][k];
                const std::string pcp = p + ".pieces[" + std::to_string(k) + "]";
                check_keys(pc, pcp, {"t", "I"});
                ProfilePiece piece;
                if (!pc.contains("t") || !pc.contains("I") || !pc["t"].is_array() ||
                    !pc["I"].is_array())
                    fail(pcp, "expected arrays 't' and 'I'");
                for (const auto& v : pc["t"]) piece.t.push_back(v.get<double>());
                for (const auto& v : pc["I"]) piece.I.push_back(v.get<double>());
                cfg.profile.pieces.push_back(std::move(piece));
            }
        } else if (pr.contains("csv")) {
            std::vector<double> breakpoints;
            if (pr.contains("breakpoints"))
                for (const auto& v : pr["breakpoints"]) breakpoints.push_back(v.get<double>());
            cfg.profile = load_profile_csv(pr["csv"].get<std::string>(), breakpoints);
        } else {
            fail(p, "need either 'pieces' or 'csv'");
        }
    }

    return normalize_units(std::move(cfg));
}

CellConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str(), path);
}

CurrentProfile load_profile_csv(const std::string& path,
                                const std::vector<double>& breakpoints) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open profile file");
    std::vector<double> ts, Is;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b))
            fail(path, "line " + std::to_string(lineno) + ": expected 't,I'");
        char* end = nullptr;
        const double t = std::strtod(a.c_str(), &end);
        if (end == a.c_str()) {
            if (lineno == 1) continue;  // header row
            fail(path, "line " + std::to_string(lineno) + ": bad time value '" + a + "'");
        }
        char* end2 = nullptr;
        const double I = std::strtod(b.c_str(), &end2);
        if (end2 == b.c_str())
            fail(path, "line " + std::to_string(lineno) + ": bad current value '" + b + "'");
        ts.push_back(t);
        Is.push_back(I);
    }
    if (ts.size() < 2) fail(path, "profile needs at least two samples");

    CurrentProfile prof;
    ProfilePiece cur;
    auto is_breakpoint = [&](double t) {
        for (double b : breakpoints)
            if (b == t && t != ts.front() && t != ts.back()) return true;
        return false;
    };
    for (std::size_t k = 0; k < ts.size(); ++k) {
        cur.t.push_back(ts[k]);
        cur.I.push_back(Is[k]);
        const bool dup_next = k + 1 < ts.size() && ts[k + 1] == ts[k];
        if (is_breakpoint(ts[k]) && cur.t.size() >= 2 && !(ts[k - 1] == ts[k])) {
            prof.pieces.push_back(cur);
            cur = ProfilePiece{};
            if (!dup_next) {  // continuous value across the breakpoint
                cur.t.push_back(ts[k]);
                cur.I.push_back(Is[k]);
            }
        }
    }
    if (cur.t.size() >= 2) prof.pieces.push_back(cur);
    if (prof.pieces.empty()) fail(path, "profile produced no usable pieces");
    for (double b : breakpoints) {
        bool found = b == ts.front() || b == ts.back();
        for (const auto& piece : prof.pieces) found = found || piece.t1() == b || piece.t0() == b;
        if (!found) fail(path, "breakpoint has no matching sample time");
    }
    return prof;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const char* const kSeriesHeader =
    "t,I,V,soc,T,ce_min,ce_max,csB_min,csB_max,dt,picard_iters,newton_iters_max,"
    "picard_residual,compat_anode_gap,compat_cathode_gap,j_total,q_r,q_j,q_c,q_e";

void write_series_header(std::ostream& os) { os << kSeriesHeader << "\n"; }

void write_series_record(std::ostream& os, const TimeSeriesRecord& r) {
    os << fmt17(r.t) << ',' << fmt17(r.I) << ',' << fmt17(r.V) << ',' << fmt17(r.soc) << ','
       << fmt17(r.T) << ',' << fmt17(r.ce_min) << ',' << fmt17(r.ce_max) << ','
       << fmt17(r.csB_min) << ',' << fmt17(r.csB_max) << ',' << fmt17(r.dt) << ','
       << r.picard_iters << ',' << r.newton_iters_max << ',' << fmt17(r.picard_residual) << ','
       << fmt17(r.compat_anode_gap) << ',' << fmt17(r.compat_cathode_gap) << ','
       << fmt17(r.j_total) << ',' << fmt17(r.heat.q_r) << ',' << fmt17(r.heat.q_j) << ','
       << fmt17(r.heat.q_c) << ',' << fmt17(r.heat.q_e) << "\n";
}

void write_snapshot_csv(std::ostream& os, const Mesh& mesh, const CellConfig& cfg,
                        const CellState& state, const PotentialSolution& sol, double I) {
    os << "# t=" << fmt17(state.t) << " T=" << fmt17(state.T) << " I=" << fmt17(I)
       << " Rf=" << fmt17(cfg.geometry.Rf) << " A=" << fmt17(cfg.geometry.A) << "\n";
    os << "x,region,ce,phie_li,phie,phis,csB,j\n";
    const std::vector<double> csB = boundary_trace(mesh, state);
    for (int i = 0; i < mesh.cells(); ++i) {
        const int e = mesh.electrode_of_cell(i);
        const char* rname = mesh.region[i] == Region::Anode
                                ? "anode"
                                : (mesh.region[i] == Region::Separator ? "separator" : "cathode");
        os << fmt17(mesh.centers[i]) << ',' << rname << ',' << fmt17(state.ce[i]) << ','
           << fmt17(sol.phie_li[i]) << ',' << fmt17(sol.phie[i]) << ',';
        if (e >= 0)
            os << fmt17(sol.phis[e]) << ',' << fmt17(csB[e]) << ',' << fmt17(sol.j[i]);
        else
            os << "nan,nan," << fmt17(sol.j[i]);
        os << "\n";
    }
}

namespace {

json config_echo(const CellConfig& c) {
    json j;
    j["units"] = {{"concentration", "internal"}};
    j["geometry"] = {{"L", c.geometry.L},         {"L1", c.geometry.L1},
                     {"delta", c.geometry.delta}, {"Rs_neg", c.geometry.Rs_neg},
                     {"Rs_pos", c.geometry.Rs_pos}, {"A", c.geometry.A},
                     {"Rf", c.geometry.Rf}};
    j["mesh"] = {{"n_anode", c.mesh.n_anode},           {"n_separator", c.mesh.n_separator},
                 {"n_cathode", c.mesh.n_cathode},       {"n_radial_neg", c.mesh.n_radial_neg},
                 {"n_radial_pos", c.mesh.n_radial_pos}, {"grading_anode", c.mesh.grading_anode},
                 {"grading_separator", c.mesh.grading_separator},
                 {"grading_cathode", c.mesh.grading_cathode}};
    auto poly = [](const Polynomial& p) { return p.c.empty() ? json::array({0.0}) : json(p.c); };
    auto table = [](const CoeffTable& t) {
        json arr = json::array();
        for (const auto& term : t.terms)
            arr.push_back({{"i", term.i}, {"j", term.j}, {"k", term.k}, {"c", term.c}});
        return arr;
    };
    j["transport"] = {{"De",
                       {{"anode", poly(c.transport.De.anode)},
                        {"separator", poly(c.transport.De.separator)},
                        {"cathode", poly(c.transport.De.cathode)}}},
                      {"De0", c.transport.De0},
                      {"Ds_neg", c.transport.Ds_neg},
                      {"Ds_pos", c.transport.Ds_pos},
                      {"sigma", {{"anode", c.transport.sigma_anode},
                                 {"cathode", c.transport.sigma_cathode}}},
                      {"sigma0", c.transport.sigma0},
                      {"kappa", {{"terms", table(c.transport.kappa.table)},
                                 {"ce_ref", c.transport.kappa.table.ce_ref},
                                 {"T_ref", c.transport.kappa.table.T_ref},
                                 {"kappa0", c.transport.kappa.kappa0},
                                 {"kappa1", c.transport.kappa.kappa1}}},
                      {"alpha_e", c.transport.alpha_e},
                      {"alpha_s_neg", c.transport.alpha_s_neg},
                      {"alpha_s_pos", c.transport.alpha_s_pos},
                      {"alpha_phie", c.transport.alpha_phie},
                      {"f_phie", c.transport.f_phie.is_log() ? json("ln")
                                                             : json(c.transport.f_phie.poly.c)}};
    j["kinetics"] = {{"delta1", {{"anode", c.kinetics.delta1_neg},
                                 {"cathode", c.kinetics.delta1_pos}}},
                     {"delta2", {{"anode", c.kinetics.delta2_neg},
                                 {"cathode", c.kinetics.delta2_pos}}},
                     {"gamma1", c.kinetics.gamma1},
                     {"gamma2", c.kinetics.gamma2},
                     {"alpha_a", c.kinetics.alpha_a},
                     {"alpha_s", c.kinetics.alpha_s_exp},
                     {"beta_a", c.kinetics.beta_a},
                     {"cs_max", c.kinetics.cs_max},
                     {"ocp", {{"lambda_min", {{"anode", poly(c.kinetics.ocp.lambda_min_neg)},
                                              {"cathode", poly(c.kinetics.ocp.lambda_min_pos)}}},
                              {"lambda_max", {{"anode", poly(c.kinetics.ocp.lambda_max_neg)},
                                              {"cathode", poly(c.kinetics.ocp.lambda_max_pos)}}},
                              {"mu", {{"anode", poly(c.kinetics.ocp.mu_neg)},
                                      {"cathode", poly(c.kinetics.ocp.mu_pos)}}},
                              {"p", {{"anode", table(c.kinetics.ocp.p_neg)},
                                     {"cathode", table(c.kinetics.ocp.p_pos)},
                                     {"bound", c.kinetics.ocp.p_bound},
                                     {"ce_ref", c.kinetics.ocp.p_neg.ce_ref},
                                     {"T_ref", c.kinetics.ocp.p_neg.T_ref}}}}}};
    if (c.s_inf) j["kinetics"]["s_inf"] = *c.s_inf;
    const char* tmode = c.thermal.mode == ThermalParams::Mode::Full
                            ? "full"
                            : (c.thermal.mode == ThermalParams::Mode::LinearTruncated ? "linear"
                                                                                      : "zero");
    j["thermal"] = {{"mode", tmode},       {"alpha_T", c.thermal.alpha_T},
                    {"T_amb", c.thermal.T_amb}, {"B_T", c.thermal.B_T},
                    {"B_T_max", c.thermal.B_T_max}, {"A_T", c.thermal.A_T},
                    {"A_T_min", c.thermal.A_T_min}, {"A_T_max", c.thermal.A_T_max}};
    j["initial"] = {{"ce0", poly(c.initial.ce0)},
                    {"cs0_neg", c.initial.cs0_neg},
                    {"cs0_pos", c.initial.cs0_pos},
                    {"T0", c.initial.T0}};
    j["admissible"] = {{"ce", {c.admissible.ce_lo, c.admissible.ce_hi}},
                       {"T", {c.admissible.T_lo, c.admissible.T_hi}}};
    j["monitors"] = {{"ce_floor_rel", c.monitors.ce_floor_rel},
                     {"ce_cap_rel", c.monitors.ce_cap_rel},
                     {"csB_margin_rel", c.monitors.csB_margin_rel},
                     {"T_min", c.monitors.T_min},
                     {"T_max", c.monitors.T_max},
                     {"potential_cap", c.monitors.potential_cap}};
    j["solver"] = {{"dt0", c.solver.dt0},
                   {"dt_min", c.solver.dt_min},
                   {"dt_max", c.solver.dt_max},
                   {"growth", c.solver.growth},
                   {"grow_after", c.solver.grow_after},
                   {"picard_tol", c.solver.picard_tol},
                   {"max_picard", c.solver.max_picard},
                   {"newton_tol", c.solver.newton_tol},
                   {"max_newton", c.solver.max_newton},
                   {"record_every", c.solver.record_every},
                   {"snapshot_every", c.solver.snapshot_every},
                   {"threads", c.solver.threads}};
    switch (c.run_mode) {
        case RunMode::Exponential: j["mode"] = "exponential"; break;
        case RunMode::Truncated: j["mode"] = "truncated"; break;
        case RunMode::TruncatedLinearFT: j["mode"] = "truncated+linearFT"; break;
    }
    json pieces = json::array();
    for (const auto& piece : c.profile.pieces)
        pieces.push_back({{"t", piece.t}, {"I", piece.I}});
    j["profile"] = {{"pieces", pieces}};
    return j;
}

}  // namespace

std::string report_json(const CellConfig& cfg, const RunResult& rr) {
    json j;
    j["outcome"] = rr.halt ? "halted" : "completed";
    if (rr.halt) {
        j["halt"] = {{"tag", to_string(rr.halt->tag)},
                     {"time", rr.halt->time},
                     {"cell", rr.halt->cell},
                     {"value", rr.halt->value},
                     {"detail", rr.halt->detail}};
    }
    j["counters"] = {{"steps_accepted", rr.steps_accepted},
                     {"max_picard_iters", rr.max_picard_iters},
                     {"max_newton_iters", rr.max_newton_iters},
                     {"max_compat_gap", rr.max_compat_gap},
                     {"max_j_total", rr.max_j_total}};
    j["ledger"] = {{"electrolyte_initial", rr.ledger.electrolyte_initial},
                   {"electrolyte_final", rr.ledger.electrolyte_final},
                   {"expected_electrolyte_change", rr.ledger.expected_electrolyte_change},
                   {"electrolyte_drift_rel", rr.ledger.electrolyte_drift_rel},
                   {"anode_initial", rr.ledger.anode_initial},
                   {"anode_final", rr.ledger.anode_final},
                   {"cathode_initial", rr.ledger.cathode_initial},
                   {"cathode_final", rr.ledger.cathode_final},
                   {"net_solid_change", rr.ledger.net_solid_change},
                   {"exchange_weighted_drift_rel", rr.ledger.exchange_weighted_drift_rel},
                   {"exchange_matched", rr.ledger.exchange_matched}};
    if (!rr.series.empty()) {
        const TimeSeriesRecord& r = rr.series.back();
        j["final"] = {{"t", r.t}, {"V", r.V}, {"soc", r.soc}, {"T", r.T}, {"I", r.I}};
    }
    j["config"] = config_echo(cfg);
    return j.dump(2) + "\n";
}

std::string to_json_string(const ValidationReport& rep) {
    json j;
    j["ok"] = rep.ok();
    json errs = json::array(), warns = json::array();
    for (const auto& e : rep.errors) errs.push_back({{"check", e.check}, {"message", e.message}});
    for (const auto& w : rep.warnings)
        warns.push_back({{"check", w.check}, {"message", w.message}});
    j["errors"] = errs;
    j["warnings"] = warns;
    return j.dump(2) + "\n";
}

std::string to_json_string(const ConditionReport& rep) {
    json j;
    j["all_satisfied"] = rep.all_satisfied;
    j["tolerance"] = rep.tolerance;
    json arr = json::array();
    for (const auto& c : rep.conditions) {
        arr.push_back({{"name", c.name},
                       {"region", c.region == Region::Anode ? "anode" : "cathode"},
                       {"T_at", c.T_at},
                       {"margin", c.margin},
                       {"raw_margin", c.raw_margin},
                       {"satisfied", c.satisfied},
                       {"boundary", c.boundary}});
    }
    j["conditions"] = arr;
    return j.dump(2) + "\n";
}

}  // namespace p2d
