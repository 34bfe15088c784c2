#include "p2dsim/config.hpp"

#include <cmath>
#include <sstream>

namespace p2d {

double Polynomial::operator()(double x) const {
    double v = 0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

double Polynomial::derivative_at(double x) const {
    double v = 0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * x + static_cast<double>(k) * c[k];
    return v;
}

bool Polynomial::is_constant() const {
    for (std::size_t k = 1; k < c.size(); ++k)
        if (c[k] != 0.0) return false;
    return true;
}

const Polynomial& RegionPoly::in(Region r) const {
    switch (r) {
        case Region::Anode: return anode;
        case Region::Separator: return separator;
        default: return cathode;
    }
}

RegionPoly RegionPoly::constant(double v) {
    return RegionPoly{Polynomial::constant(v), Polynomial::constant(v), Polynomial::constant(v)};
}

namespace {
double ipow(double x, int n) {
    if (n == 0) return 1.0;
    if (n < 0) return 1.0 / ipow(x, -n);
    double r = 1.0, b = x;
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}
}  // namespace

double CoeffTable::value(double ce, double cs, double T) const {
    double v = 0;
    for (const Term& t : terms)
        v += t.c * ipow(ce / ce_ref, t.i) * ipow(cs / cs_ref, t.j) * ipow(T / T_ref, t.k);
    return v;
}

double CoeffTable::dT(double ce, double cs, double T) const {
    double v = 0;
    for (const Term& t : terms) {
        if (t.k == 0) continue;
        v += t.c * ipow(ce / ce_ref, t.i) * ipow(cs / cs_ref, t.j) *
             (static_cast<double>(t.k) / T_ref) * ipow(T / T_ref, t.k - 1);
    }
    return v;
}

double FPhie::operator()(double ce) const {
    return kind == Kind::NaturalLog ? std::log(ce) : poly(ce);
}

double FPhie::derivative_at(double ce) const {
    return kind == Kind::NaturalLog ? 1.0 / ce : poly.derivative_at(ce);
}

const Polynomial& OCPParams::lambda_min(Region r) const {
    return r == Region::Anode ? lambda_min_neg : lambda_min_pos;
}
const Polynomial& OCPParams::lambda_max(Region r) const {
    return r == Region::Anode ? lambda_max_neg : lambda_max_pos;
}
const Polynomial& OCPParams::mu(Region r) const { return r == Region::Anode ? mu_neg : mu_pos; }
const CoeffTable& OCPParams::p(Region r) const { return r == Region::Anode ? p_neg : p_pos; }

CellConfig normalize_units(CellConfig cfg) {
    double f = 1.0;
    switch (cfg.input_unit) {
        case ConcentrationUnit::Internal: return cfg;
        case ConcentrationUnit::MolPerCm3: f = 1.0; break;
        case ConcentrationUnit::MolPerM3: f = 1e-6; break;  // mol/m^3 -> mol/cm^3
    }
    cfg.kinetics.cs_max *= f;
    for (double& c : cfg.initial.ce0.c) c *= f;
    cfg.initial.cs0_neg *= f;
    cfg.initial.cs0_pos *= f;
    cfg.admissible.ce_lo *= f;
    cfg.admissible.ce_hi *= f;
    // Concentration-dimensioned reference scales inside coefficient tables.
    cfg.transport.kappa.table.ce_ref *= f;
    cfg.kinetics.ocp.p_neg.ce_ref *= f;
    cfg.kinetics.ocp.p_neg.cs_ref *= f;
    cfg.kinetics.ocp.p_pos.ce_ref *= f;
    cfg.kinetics.ocp.p_pos.cs_ref *= f;
    cfg.input_unit = ConcentrationUnit::Internal;
    return cfg;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    if (ok()) {
        os << "config valid";
        if (!warnings.empty()) os << " (" << warnings.size() << " warning(s))";
    } else {
        os << errors.size() << " validation error(s)";
    }
    os << "\n";
    for (const auto& e : errors) os << "  error   " << e.check << ": " << e.message << "\n";
    for (const auto& w : warnings) os << "  warning " << w.check << ": " << w.message << "\n";
    return os.str();
}

namespace {

struct Checker {
    ValidationReport rep;

    void fail(std::string check, std::string msg) {
        rep.errors.push_back({std::move(check), std::move(msg)});
    }
    void warn(std::string check, std::string msg) {
        rep.warnings.push_back({std::move(check), std::move(msg)});
    }
    void require(bool cond, const std::string& check, const std::string& msg) {
        if (!cond) fail(check, msg);
    }
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void check_open_unit_interval(Checker& c, const char* name, double v) {
    if (!(v > 0.0 && v < 1.0))
        c.fail(std::string("kinetics.") + name,
               std::string(name) + " ∉ (0,1): got " + num(v));
}

}  // namespace

ValidationReport validate_config(const CellConfig& cfg) {
    Checker c;

    if (cfg.input_unit != ConcentrationUnit::Internal)
        c.fail("units", "config must be unit-normalized before validation");

    // geometry
    const auto& g = cfg.geometry;
    c.require(g.L1 > 0, "geometry.L1", "anode thickness must be positive; got " + num(g.L1));
    c.require(g.delta > 0, "geometry.delta",
              "separator thickness must be positive; got " + num(g.delta));
    c.require(g.L > g.L1 + g.delta, "geometry.L",
              "need L1 + delta < L (nondegenerate cathode); got L1+delta = " +
                  num(g.L1 + g.delta) + ", L = " + num(g.L));
    c.require(g.Rs_neg > 0 && g.Rs_pos > 0, "geometry.Rs",
              "particle radii must be positive; got " + num(g.Rs_neg) + ", " + num(g.Rs_pos));
    c.require(g.A > 0, "geometry.A", "plate area must be positive; got " + num(g.A));
    c.require(g.Rf >= 0, "geometry.Rf", "film resistance must be nonnegative; got " + num(g.Rf));

    // mesh
    const auto& m = cfg.mesh;
    c.require(m.n_anode >= 3 && m.n_separator >= 3 && m.n_cathode >= 3, "mesh.macro",
              "need at least 3 cells per region");
    c.require(m.n_radial_neg >= 3 && m.n_radial_pos >= 3, "mesh.radial",
              "need at least 3 radial shells per particle");

    // admissible box (used by the sampled checks below)
    const auto& box = cfg.admissible;
    const bool box_ok = box.ce_lo > 0 && box.ce_hi > box.ce_lo && box.T_lo > 0 && box.T_hi > box.T_lo;
    c.require(box_ok, "admissible",
              "admissible box needs 0 < ce_lo < ce_hi and 0 < T_lo < T_hi");

    // kinetics exponents strictly inside (0,1)
    const auto& kp = cfg.kinetics;
    check_open_unit_interval(c, "alpha_a", kp.alpha_a);
    check_open_unit_interval(c, "alpha_s", kp.alpha_s_exp);
    check_open_unit_interval(c, "beta_a", kp.beta_a);
    c.require(kp.gamma1 > 0 && kp.gamma2 > 0, "kinetics.gamma",
              "gamma1, gamma2 must be positive; got " + num(kp.gamma1) + ", " + num(kp.gamma2));
    c.require(kp.delta1_neg > 0 && kp.delta1_pos > 0 && kp.delta2_neg > 0 && kp.delta2_pos > 0,
              "kinetics.delta", "rate prefactors delta1, delta2 must be positive in both electrodes");
    c.require(kp.cs_max > 0 && kp.cs_max < 1, "kinetics.cs_max",
              "cs_max must lie in (0,1) after unit normalization; got " + num(kp.cs_max));

    if (cfg.run_mode != RunMode::Exponential) {
        if (!cfg.s_inf || !std::isfinite(*cfg.s_inf))
            c.fail("kinetics.s_inf", "truncated flux mode requires a finite truncation cutoff s_inf");
        if (!cfg.transport.f_phie.is_log())
            c.fail("transport.f_phie", "truncated flux mode requires f_phie = ln");
    }

    // transport bounds (sampled)
    const auto& tp = cfg.transport;
    c.require(tp.De0 > 0, "transport.De0", "declared De lower bound must be positive; got " + num(tp.De0));
    if (tp.De0 > 0 && g.L1 > 0 && g.delta > 0 && g.L > g.L1 + g.delta) {
        const double edges[4] = {0.0, g.L1, g.L1 + g.delta, g.L};
        const Region regions[3] = {Region::Anode, Region::Separator, Region::Cathode};
        for (int rk = 0; rk < 3; ++rk) {
            const Polynomial& p = tp.De.in(regions[rk]);
            for (int s = 0; s <= 32; ++s) {
                const double x = edges[rk] + (edges[rk + 1] - edges[rk]) * s / 32.0;
                const double v = p(x);
                if (!(v >= tp.De0)) {
                    c.fail("transport.De",
                           "De(x) = " + num(v) + " below declared bound De0 = " + num(tp.De0) +
                               " at x = " + num(x));
                    break;
                }
            }
        }
    }
    c.require(tp.sigma0 > 0, "transport.sigma0",
              "declared sigma lower bound must be positive; got " + num(tp.sigma0));
    c.require(tp.sigma_anode >= tp.sigma0 && tp.sigma_cathode >= tp.sigma0, "transport.sigma",
              "electrode conductivities must satisfy sigma >= sigma0; got " + num(tp.sigma_anode) +
                  ", " + num(tp.sigma_cathode));
    c.require(tp.kappa.kappa0 > 0 && tp.kappa.kappa1 >= tp.kappa.kappa0, "transport.kappa_bounds",
              "need 0 < kappa0 <= kappa1; got [" + num(tp.kappa.kappa0) + ", " +
                  num(tp.kappa.kappa1) + "]");
    if (box_ok && tp.kappa.kappa0 > 0) {
        bool bad = false;
        for (int i = 0; i <= 16 && !bad; ++i) {
            for (int j = 0; j <= 8 && !bad; ++j) {
                const double ce = box.ce_lo + (box.ce_hi - box.ce_lo) * i / 16.0;
                const double T = box.T_lo + (box.T_hi - box.T_lo) * j / 8.0;
                const double v = tp.kappa(ce, T);
                if (!(v >= tp.kappa.kappa0 && v <= tp.kappa.kappa1)) {
                    c.fail("transport.kappa",
                           "kappa(" + num(ce) + ", " + num(T) + ") = " + num(v) +
                               " outside declared [" + num(tp.kappa.kappa0) + ", " +
                               num(tp.kappa.kappa1) + "]");
                    bad = true;
                }
            }
        }
    }
    c.require(tp.alpha_e > 0, "transport.alpha_e",
              "alpha_e must be positive; got " + num(tp.alpha_e));
    c.require(tp.alpha_s_neg > 0 && tp.alpha_s_pos > 0, "transport.alpha_s",
              "alpha_s must be positive in both electrodes; got " + num(tp.alpha_s_neg) + ", " +
                  num(tp.alpha_s_pos));
    c.require(tp.alpha_phie >= 0, "transport.alpha_phie",
              "alpha_phie must be nonnegative; got " + num(tp.alpha_phie));

    // open-circuit coefficient signs over the admissible temperature range
    if (box_ok) {
        const Region els[2] = {Region::Anode, Region::Cathode};
        const char* names[3] = {"lambda_min", "lambda_max", "mu"};
        for (Region r : els) {
            const Polynomial* polys[3] = {&kp.ocp.lambda_min(r), &kp.ocp.lambda_max(r),
                                          &kp.ocp.mu(r)};
            for (int k = 0; k < 3; ++k) {
                for (int s = 0; s <= 16; ++s) {
                    const double T = box.T_lo + (box.T_hi - box.T_lo) * s / 16.0;
                    const double v = (*polys[k])(T);
                    if (!(v >= 0)) {
                        c.fail(std::string("ocp.") + names[k],
                               std::string(names[k]) + " negative (" + num(v) + ") at T = " +
                                   num(T) + (r == Region::Anode ? " in anode" : " in cathode"));
                        break;
                    }
                }
            }
        }
        // |p| <= p_bound sampled over the admissible box
        if (!kp.ocp.p_neg.empty() || !kp.ocp.p_pos.empty()) {
            c.require(kp.ocp.p_bound >= 0, "ocp.p_bound",
                      "declared p bound must be nonnegative; got " + num(kp.ocp.p_bound));
            bool bad = false;
            for (Region r : els) {
                const CoeffTable& pt = kp.ocp.p(r);
                for (int i = 0; i <= 8 && !bad; ++i)
                    for (int jj = 0; jj <= 8 && !bad; ++jj)
                        for (int k = 0; k <= 4 && !bad; ++k) {
                            const double ce = box.ce_lo + (box.ce_hi - box.ce_lo) * i / 8.0;
                            const double cs = kp.cs_max * (0.02 + 0.96 * jj / 8.0);
                            const double T = box.T_lo + (box.T_hi - box.T_lo) * k / 4.0;
                            const double v = pt.value(ce, cs, T);
                            if (!(std::abs(v) <= kp.ocp.p_bound)) {
                                c.fail("ocp.p", "|p| = " + num(std::abs(v)) +
                                                    " exceeds declared bound " +
                                                    num(kp.ocp.p_bound) + " at (ce, cs, T) = (" +
                                                    num(ce) + ", " + num(cs) + ", " + num(T) + ")");
                                bad = true;
                            }
                        }
            }
        }
    }

    // thermal
    const auto& th = cfg.thermal;
    c.require(th.alpha_T >= 0, "thermal.alpha_T",
              "cooling rate must be nonnegative; got " + num(th.alpha_T));
    c.require(th.T_amb > 0, "thermal.T_amb",
              "ambient temperature must be positive; got " + num(th.T_amb));
    if (th.mode == ThermalParams::Mode::LinearTruncated) {
        c.require(th.B_T_max >= 0, "thermal.B_T_max",
                  "declared B_T bound must be nonnegative; got " + num(th.B_T_max));
        c.require(th.A_T_min <= th.A_T_max, "thermal.A_T_box",
                  "need A_T_min <= A_T_max; got [" + num(th.A_T_min) + ", " + num(th.A_T_max) + "]");
        if (th.B_T < 0 || th.B_T > th.B_T_max)
            c.warn("thermal.B_T", "B_T = " + num(th.B_T) + " outside [0, " + num(th.B_T_max) +
                                      "]; it will be clamped");
        if (th.A_T < th.A_T_min || th.A_T > th.A_T_max)
            c.warn("thermal.A_T", "A_T = " + num(th.A_T) + " outside [" + num(th.A_T_min) + ", " +
                                      num(th.A_T_max) + "]; it will be clamped");
    }

    // initial data admissibility
    const auto& init = cfg.initial;
    if (g.L > 0) {
        for (int s = 0; s <= 64; ++s) {
            const double x = g.L * s / 64.0;
            const double v = init.ce0(x);
            if (!(v > 0)) {
                c.fail("initial.ce0", "initial electrolyte concentration not positive: ce0(" +
                                          num(x) + ") = " + num(v));
                break;
            }
        }
    }
    c.require(init.cs0_neg > 0 && init.cs0_neg < kp.cs_max, "initial.cs0_neg",
              "need 0 < cs0_neg < cs_max; got " + num(init.cs0_neg));
    c.require(init.cs0_pos > 0 && init.cs0_pos < kp.cs_max, "initial.cs0_pos",
              "need 0 < cs0_pos < cs_max; got " + num(init.cs0_pos));
    c.require(init.T0 > 0, "initial.T0", "initial temperature must be positive; got " + num(init.T0));

    // monitors
    const auto& mon = cfg.monitors;
    c.require(mon.ce_floor_rel > 0 && mon.ce_cap_rel > 1 && mon.csB_margin_rel > 0 &&
                  mon.csB_margin_rel < 0.5 && mon.T_min > 0 && mon.T_max > mon.T_min &&
                  mon.potential_cap > 0,
              "monitors", "monitor thresholds out of range");

    // solver options
    const auto& so = cfg.solver;
    c.require(so.dt0 > 0 && so.dt_min > 0 && so.dt_min <= so.dt0 && so.dt_max >= so.dt0,
              "solver.dt", "need 0 < dt_min <= dt0 <= dt_max");
    c.require(so.growth >= 1.0, "solver.growth", "dt growth factor must be >= 1");
    c.require(so.picard_tol > 0 && so.newton_tol > 0, "solver.tolerances",
              "picard_tol and newton_tol must be positive");
    c.require(so.max_picard >= 1 && so.max_newton >= 1, "solver.iterations",
              "iteration caps must be >= 1");
    c.require(so.record_every >= 1, "solver.record_every", "recording cadence must be >= 1");
    c.require(so.threads >= 1, "solver.threads", "thread count must be >= 1");

    // current profile structure
    const auto& prof = cfg.profile;
    if (prof.pieces.empty()) {
        c.fail("profile", "current profile has no pieces");
    } else {
        double prev_end = 0.0;
        bool structure_ok = true;
        for (std::size_t k = 0; k < prof.pieces.size() && structure_ok; ++k) {
            const auto& piece = prof.pieces[k];
            if (piece.t.size() < 2 || piece.t.size() != piece.I.size()) {
                c.fail("profile.piece", "piece " + std::to_string(k) +
                                            " needs >= 2 (t, I) nodes of equal length");
                structure_ok = false;
                break;
            }
            for (std::size_t i = 1; i < piece.t.size(); ++i)
                if (!(piece.t[i] > piece.t[i - 1])) {
                    c.fail("profile.piece", "piece " + std::to_string(k) +
                                                " node times must be strictly increasing");
                    structure_ok = false;
                    break;
                }
            if (structure_ok && piece.t0() != prev_end) {
                c.fail("profile.contiguity",
                       "piece " + std::to_string(k) + " starts at t = " + num(piece.t0()) +
                           ", expected " + num(prev_end));
                structure_ok = false;
            }
            prev_end = piece.t1();
        }
        if (structure_ok && !(prev_end > 0))
            c.fail("profile.t_end", "profile must end at a positive time");
    }

    return c.rep;
}

}  // namespace p2d
